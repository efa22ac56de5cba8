use ndarray::{Array1, Array2};
use num_complex::Complex;
use rand_distr::{Distribution, StandardNormal};

use super::{check_sites, Estimator, OtocMetadata, OtocSeries};
use crate::error::{Error, Result};
use crate::evolve::{KrylovPropagator, Propagator, SpectralPropagator, SpinState};
use crate::model::{local_pauli, Axis, Basis, PauliOperator};
use crate::rng::rng_from_seed;
use crate::scalar::Real;

/// Columns per batched evaluation; bounds the working memory.
const MAX_BATCH_COLUMNS: usize = 512;

/// Haar-random state: a normalized complex Gaussian vector.
pub fn haar_state<T: Real>(basis: &Basis, seed: u64) -> SpinState<T> {
    let mut rng = rng_from_seed(seed);
    let mut amps: Array1<Complex<T>> = Array1::from_shape_simple_fn(basis.dim(), || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex::new(T::lit(re), T::lit(im))
    });
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
    amps.mapv_inplace(|a| a / norm);
    SpinState { amplitudes: amps, basis: basis.clone() }
}

/// `B ψ = ±ψ`? Returns the sign if so.
fn eigen_sign<T: Real>(op: &PauliOperator, psi: &Array1<Complex<T>>) -> Option<T> {
    let mut sign = None;
    for k in 0..psi.len() {
        if psi[k] == Complex::new(T::zero(), T::zero()) {
            continue;
        }
        let (target, s) = op.action(k);
        if target != k || op.axis() != Axis::Z {
            return None;
        }
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return None,
            _ => {}
        }
    }
    sign.map(|s| if s > 0 { T::one() } else { -T::one() })
}

/// `Σ_a |wb[a] − (B w)[a]|²`.
fn commutator_norm<T: Real>(op: &PauliOperator, w: ndarray::ArrayView1<'_, Complex<T>>, wb: ndarray::ArrayView1<'_, Complex<T>>) -> T {
    let mut acc = T::zero();
    for a in 0..w.len() {
        let (target, c) = op.coefficient::<T>(a);
        acc += (wb[target] - c * w[a]).norm_sqr();
    }
    acc
}

/// Where the column `B_j ψ` lives: its own column, or `±` the `ψ` column.
#[derive(Clone, Copy)]
struct ColumnRef<T> {
    col: usize,
    sign: T,
}

/// Per-state commutator norms `‖[σᵃ_probe(t), σᵃ_j] ψ‖²`, one
/// `(sites × times)` matrix per input state.
pub fn state_commutator_norms<T: Real>(
    prop: &Propagator<T>,
    states: &[SpinState<T>],
    probe: usize,
    sites: &[usize],
    axis: Axis,
    times: &[T],
) -> Result<Vec<Array2<T>>> {
    let basis = prop.basis();
    check_sites(basis.n_sites(), probe, sites)?;
    let w_op = local_pauli(axis, probe, basis)?;
    let b_ops = sites.iter().map(|&j| local_pauli(axis, j, basis)).collect::<Result<Vec<_>>>()?;
    for psi in states {
        if psi.basis != *basis {
            return Err(Error::BasisMismatch);
        }
    }
    match prop {
        Propagator::Spectral(sp) => spectral_norms(sp, states, &w_op, &b_ops, times),
        Propagator::Krylov(kp) => states.iter().map(|psi| krylov_norms(kp, psi, &w_op, &b_ops, times)).collect(),
    }
}

fn spectral_norms<T: Real>(
    sp: &SpectralPropagator<T>,
    states: &[SpinState<T>],
    w_op: &PauliOperator,
    b_ops: &[PauliOperator],
    times: &[T],
) -> Result<Vec<Array2<T>>> {
    let a = sp.eigen_operator(w_op)?;
    let mut out = Vec::with_capacity(states.len());
    let mut start = 0;
    while start < states.len() {
        // Gather a batch of states whose columns fit the budget.
        let mut columns: Vec<Array1<Complex<T>>> = Vec::new();
        let mut refs: Vec<(usize, Vec<ColumnRef<T>>)> = Vec::new();
        let mut end = start;
        while end < states.len() && (columns.is_empty() || columns.len() + 1 + b_ops.len() <= MAX_BATCH_COLUMNS) {
            let psi = &states[end].amplitudes;
            let base = columns.len();
            columns.push(psi.clone());
            let mut r = Vec::with_capacity(b_ops.len());
            for b in b_ops {
                match eigen_sign(b, psi) {
                    Some(sign) => r.push(ColumnRef { col: base, sign }),
                    None => {
                        r.push(ColumnRef { col: columns.len(), sign: T::one() });
                        columns.push(b.apply(psi.view()));
                    }
                }
            }
            refs.push((base, r));
            end += 1;
        }
        let mut x = Array2::from_elem((sp.dim(), columns.len()), Complex::new(T::zero(), T::zero()));
        for (c, col) in columns.iter().enumerate() {
            x.column_mut(c).assign(col);
        }
        let y0 = sp.to_eigen(x.view());
        drop(x);
        let mut batch: Vec<Array2<T>> = (start..end).map(|_| Array2::zeros((b_ops.len(), times.len()))).collect();
        for (n, &t) in times.iter().enumerate() {
            let mut y = y0.clone();
            sp.apply_phases(&mut y, t);
            let mut ay = a.apply(sp, y.view());
            drop(y);
            sp.apply_phases(&mut ay, -t);
            let z = sp.from_eigen(ay.view());
            for (s_idx, (base, r)) in refs.iter().enumerate() {
                let w = z.column(*base);
                for (k, (b, cr)) in b_ops.iter().zip(r.iter()).enumerate() {
                    let value = if cr.col == *base {
                        // B ψ = ±ψ, so W B ψ = ±W ψ.
                        let wb = w.mapv(|v| v * cr.sign);
                        commutator_norm(b, w, wb.view())
                    } else {
                        commutator_norm(b, w, z.column(cr.col))
                    };
                    batch[s_idx][[k, n]] = value;
                }
            }
        }
        out.extend(batch);
        start = end;
    }
    Ok(out)
}

fn krylov_norms<T: Real>(
    kp: &KrylovPropagator<T>,
    psi: &SpinState<T>,
    w_op: &PauliOperator,
    b_ops: &[PauliOperator],
    times: &[T],
) -> Result<Array2<T>> {
    let mut values = Array2::zeros((b_ops.len(), times.len()));
    // Forward-evolved ψ and B_j ψ, advanced incrementally along the grid.
    let mut fwd: Vec<SpinState<T>> = std::iter::once(Ok(psi.clone()))
        .chain(b_ops.iter().map(|b| SpinState::new(psi.basis.clone(), b.apply(psi.amplitudes.view()))))
        .collect::<Result<_>>()?;
    let mut now = T::zero();
    let heisenberg = |v: &SpinState<T>, t: T| -> Result<SpinState<T>> {
        let kicked = SpinState { amplitudes: w_op.apply(v.amplitudes.view()), basis: v.basis.clone() };
        kp.evolve(&kicked, -t)
    };
    for (n, &t) in times.iter().enumerate() {
        if t != now {
            for v in fwd.iter_mut() {
                *v = kp.evolve(v, t - now)?;
            }
            now = t;
        }
        let w = heisenberg(&fwd[0], t)?;
        for (k, b) in b_ops.iter().enumerate() {
            let wb = heisenberg(&fwd[k + 1], t)?;
            values[[k, n]] = commutator_norm(b, w.amplitudes.view(), wb.amplitudes.view());
        }
    }
    Ok(values)
}

/// Infinite-temperature `C(r,t)` estimated by averaging over `n_haar`
/// Haar-random states.
pub fn otoc_typicality<T: Real>(
    prop: &Propagator<T>,
    probe: usize,
    sites: &[usize],
    axis: Axis,
    times: &[T],
    n_haar: usize,
    seed: u64,
) -> Result<OtocSeries<T>> {
    if n_haar == 0 {
        return Err(Error::InvalidArgument("n_haar must be at least 1".into()));
    }
    let states: Vec<SpinState<T>> = (0..n_haar)
        .map(|k| haar_state(prop.basis(), crate::rng::derive_seed(seed, crate::rng::HAAR_STREAM, k as u64)))
        .collect();
    let per_state = state_commutator_norms(prop, &states, probe, sites, axis, times)?;
    let mut values = Array2::zeros((sites.len(), times.len()));
    for m in &per_state {
        values += m;
    }
    values /= T::from_usize(n_haar).expect("count fits");
    let metadata = OtocMetadata {
        axis,
        probe,
        sites: sites.to_vec(),
        estimator: Estimator::Typicality { n_haar, seed },
        disorder_seeds: vec![],
        spec: None,
    };
    OtocSeries::new(times.to_vec(), values, metadata)
}

/// State-specific commutator norm `⟨ψ|[W,B]†[W,B]|ψ⟩`.
pub fn otoc_state<T: Real>(
    prop: &Propagator<T>,
    psi: &SpinState<T>,
    probe: usize,
    sites: &[usize],
    axis: Axis,
    times: &[T],
    label: &str,
) -> Result<OtocSeries<T>> {
    let norm = psi.norm();
    if (norm - T::one()).abs() > T::epsilon().sqrt() {
        return Err(Error::InvalidArgument(format!("state is not normalized (norm {norm})")));
    }
    let values = state_commutator_norms(prop, std::slice::from_ref(psi), probe, sites, axis, times)?
        .pop()
        .expect("one state");
    let metadata = OtocMetadata {
        axis,
        probe,
        sites: sites.to_vec(),
        estimator: Estimator::SingleState { state: label.to_string() },
        disorder_seeds: vec![],
        spec: None,
    };
    OtocSeries::new(times.to_vec(), values, metadata)
}

