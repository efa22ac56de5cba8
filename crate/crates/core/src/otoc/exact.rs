use ndarray::Array2;
use num_complex::Complex;

use super::{check_sites, Estimator, OtocMetadata, OtocSeries};
use crate::error::{Error, Result};
use crate::evolve::SpectralPropagator;
use crate::linalg::{complex_real_mul, real_complex_mul};
use crate::model::{local_pauli, Axis};
use crate::scalar::Real;

/// Largest dimension for dense operator algebra (N = 10 in the full basis).
pub const DEFAULT_TRACE_CAP: usize = 1 << 10;

/// Dense `W(t) = e^{iHt} σ e^{-iHt}` in the basis.
fn heisenberg_operator<T: Real>(
    sp: &SpectralPropagator<T>,
    op: &crate::evolve::EigenOperator<T>,
    t: T,
) -> Array2<Complex<T>> {
    let d = sp.dim();
    let mut w = Array2::from_elem((d, d), Complex::new(T::zero(), T::zero()));
    let blocks = sp.blocks();
    for p in &op.pieces {
        let (bt, bs) = (&blocks[p.target], &blocks[p.source]);
        let phased = Array2::from_shape_fn(p.matrix.dim(), |(a, b)| {
            T::cis((bt.energies[a] - bs.energies[b]) * t) * p.matrix[[a, b]] * op.phase
        });
        let right = complex_real_mul(phased.view(), bs.vectors.t());
        let full = real_complex_mul(bt.vectors.view(), right.view());
        for (a, &ma) in bt.members.iter().enumerate() {
            for (b, &mb) in bs.members.iter().enumerate() {
                w[[ma, mb]] += full[[a, b]];
            }
        }
    }
    w
}

/// Exact normalized trace `D⁻¹ Tr([W,B]†[W,B])`. Fails when the basis is
/// larger than `cap`.
pub fn otoc_exact_trace<T: Real>(
    sp: &SpectralPropagator<T>,
    probe: usize,
    sites: &[usize],
    axis: Axis,
    times: &[T],
    cap: usize,
) -> Result<OtocSeries<T>> {
    let basis = sp.basis();
    check_sites(basis.n_sites(), probe, sites)?;
    let d = basis.dim();
    if d > cap {
        return Err(Error::DenseCapExceeded { dim: d, cap });
    }
    let a = sp.eigen_operator(&local_pauli(axis, probe, basis)?)?;
    let b_ops = sites.iter().map(|&j| local_pauli(axis, j, basis)).collect::<Result<Vec<_>>>()?;
    let coeffs: Vec<Vec<(usize, Complex<T>)>> =
        b_ops.iter().map(|b| (0..d).map(|k| b.coefficient::<T>(k)).collect()).collect();
    let inv_d = T::one() / T::from_usize(d).expect("dimension fits");
    let mut values = Array2::zeros((sites.len(), times.len()));
    for (n, &t) in times.iter().enumerate() {
        let w = heisenberg_operator(sp, &a, t);
        for (k, c) in coeffs.iter().enumerate() {
            // (W B)_{a,y} = W_{a,πy} c_y and (B W)_{a,y} = c_{πa} W_{πa,y}.
            let mut acc = T::zero();
            for row in 0..d {
                let src = c[row].0;
                let c_src = c[src].1;
                for col in 0..d {
                    let (pc, cc) = c[col];
                    acc += (w[[row, pc]] * cc - c_src * w[[src, col]]).norm_sqr();
                }
            }
            values[[k, n]] = acc * inv_d;
        }
    }
    let metadata = OtocMetadata {
        axis,
        probe,
        sites: sites.to_vec(),
        estimator: Estimator::ExactTrace,
        disorder_seeds: vec![],
        spec: None,
    };
    OtocSeries::new(times.to_vec(), values, metadata)
}
