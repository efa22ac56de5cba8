use ndarray::Array2;

use super::EnsembleResult;
use crate::error::{Error, Result};
use crate::otoc::ising_otoc_closed_form;
use crate::scalar::Real;

/// Mean and standard error of the mean; the SEM is absent for one sample.
pub fn mean_and_sem<T: Real>(xs: &[T]) -> (T, Option<T>) {
    let n = T::from_usize(xs.len()).expect("count fits");
    let mean = xs.iter().copied().sum::<T>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / (n - T::one());
    (mean, Some((var / n).sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanSem<T> {
    pub mean: Array2<T>,
    pub sem: Option<Array2<T>>,
}

/// Elementwise mean and SEM over realizations, summed in realization order.
pub fn ensemble_mean_sem<T: Real>(result: &EnsembleResult<T>) -> Result<MeanSem<T>> {
    let first = result
        .series
        .first()
        .ok_or_else(|| Error::InsufficientData("empty ensemble".into()))?;
    let dim = first.values.dim();
    for s in &result.series {
        if s.values.dim() != dim || s.times != first.times {
            return Err(Error::InvalidArgument("ensemble members do not share a grid".into()));
        }
    }
    let n = result.series.len();
    let mut mean = Array2::zeros(dim);
    let mut sem = Array2::zeros(dim);
    let mut column = vec![T::zero(); n];
    for ((a, b), m) in mean.indexed_iter_mut() {
        for (k, s) in result.series.iter().enumerate() {
            column[k] = s.values[[a, b]];
        }
        let (mu, se) = mean_and_sem(&column);
        *m = mu;
        sem[[a, b]] = se.unwrap_or(T::zero());
    }
    Ok(MeanSem { mean, sem: if n > 1 { Some(sem) } else { None } })
}

/// Fraction of realizations with `C(r,t)` strictly below the Ising value
/// `2 − 2cos(4 C_α t / r^α)` for the cutoff exponent `alpha`.
pub fn slow_fraction<T: Real>(result: &EnsembleResult<T>, r: i64, t: T, alpha: T) -> Result<T> {
    if r == 0 {
        return Err(Error::InvalidArgument("distance must be nonzero".into()));
    }
    let k = result.time_index(t);
    let t_grid = result.times()[k];
    let cutoff = ising_otoc_closed_form(alpha, result.spec.coupling, r.unsigned_abs() as usize, t_grid)?;
    let samples = result.samples(r, k)?;
    let slow = samples.iter().filter(|&&c| c < cutoff).count();
    Ok(T::from_usize(slow).expect("count fits") / T::from_usize(samples.len()).expect("count fits"))
}
