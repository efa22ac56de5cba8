use ndarray::Array2;

use super::{check_sites, Estimator, OtocMetadata, OtocSeries};
use crate::error::{Error, Result};
use crate::model::{local_pauli, Axis, HamiltonianMatrix, PauliOperator};
use crate::scalar::Real;

/// Real "shape" of a Pauli operator: the matrix with the global phase removed.
fn pauli_shape<T: Real>(op: &PauliOperator, d: usize) -> Array2<T> {
    let mut m = Array2::zeros((d, d));
    for k in 0..d {
        let (target, sign) = op.action(k);
        m[[target, k]] = if sign > 0 { T::one() } else { -T::one() };
    }
    m
}

fn commutator<T: Real>(a: &Array2<T>, b: &Array2<T>) -> Array2<T> {
    a.dot(b) - b.dot(a)
}

/// Infinite-temperature `C(r,t)` from the truncated series
/// `[W(t), B] = Σ_n (it)ⁿ/n! [ad_Hⁿ(σ_probe), B]`, with Gram matrix
/// `G_nm = D⁻¹ Tr(Y_nᵀ Y_m)`:
///
/// `C(t) = Σ_{n,m ≤ order} Re(i^{m−n}) t^{n+m} / (n! m!) G_nm`.
///
/// Exact up to `O(t^{2 order + 2})`; intended for `t ‖H‖ ≪ 1`, where the
/// leading terms are far below the rounding floor of a propagator-based
/// evaluation.
pub fn short_time_otoc<T: Real>(
    h: &HamiltonianMatrix<T>,
    probe: usize,
    sites: &[usize],
    axis: Axis,
    order: usize,
    times: &[T],
    cap: usize,
) -> Result<OtocSeries<T>> {
    let basis = h.basis();
    check_sites(basis.n_sites(), probe, sites)?;
    let d = basis.dim();
    if d > cap {
        return Err(Error::DenseCapExceeded { dim: d, cap });
    }
    let hd = h.to_dense();
    let mut nested = vec![pauli_shape::<T>(&local_pauli(axis, probe, basis)?, d)];
    for n in 0..order {
        let next = commutator(&hd, &nested[n]);
        nested.push(next);
    }
    let inv_d = T::one() / T::from_usize(d).expect("dimension fits");
    let mut factorial = vec![T::one(); order + 1];
    for n in 1..=order {
        factorial[n] = factorial[n - 1] * T::from_usize(n).expect("order fits");
    }
    let mut values = Array2::zeros((sites.len(), times.len()));
    for (k, &j) in sites.iter().enumerate() {
        let b = pauli_shape::<T>(&local_pauli(axis, j, basis)?, d);
        let ys: Vec<Array2<T>> = nested.iter().map(|x| commutator(x, &b)).collect();
        let mut gram = Array2::zeros((order + 1, order + 1));
        for n in 0..=order {
            for m in n..=order {
                let g = (&ys[n] * &ys[m]).sum() * inv_d;
                gram[[n, m]] = g;
                gram[[m, n]] = g;
            }
        }
        for (col, &t) in times.iter().enumerate() {
            let mut acc = T::zero();
            for n in 0..=order {
                for m in 0..=order {
                    let re = match (m + 4 - n % 4) % 4 {
                        0 => T::one(),
                        2 => -T::one(),
                        _ => continue,
                    };
                    acc += re * t.powi((n + m) as i32) / (factorial[n] * factorial[m]) * gram[[n, m]];
                }
            }
            values[[k, col]] = acc;
        }
    }
    let metadata = OtocMetadata {
        axis,
        probe,
        sites: sites.to_vec(),
        estimator: Estimator::ShortTimeSeries { order },
        disorder_seeds: vec![],
        spec: None,
    };
    OtocSeries::new(times.to_vec(), values, metadata)
}
