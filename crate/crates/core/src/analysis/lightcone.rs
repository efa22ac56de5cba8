use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LightConeModel {
    /// `t_θ ∝ e^{βr}`: `ln t` linear in `r`.
    Exponential,
    /// `t_θ ∝ r^β`: `ln t` linear in `ln r`.
    Algebraic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightConeFit<T = f64> {
    pub theta: T,
    pub model: LightConeModel,
    /// Smallest distance included in the fit.
    pub r_min: i64,
    pub points: Vec<(i64, T)>,
    pub beta: T,
    pub beta_stderr: T,
    pub intercept: T,
    /// Residual sum of squares in `ln t`.
    pub rss: T,
}

/// First upward crossing of `theta`, interpolated linearly in `(ln t, C)`
/// (linearly in `t` when the earlier time is zero). Absent if the curve
/// never reaches `theta`.
pub fn threshold_crossings<T: Real>(curve: ArrayView1<'_, T>, times: &[T], theta: T) -> Option<T> {
    assert_eq!(curve.len(), times.len());
    if curve.is_empty() {
        return None;
    }
    if curve[0] >= theta {
        return Some(times[0]);
    }
    for k in 1..curve.len() {
        let (c0, c1) = (curve[k - 1], curve[k]);
        if c0 < theta && c1 >= theta {
            let f = (theta - c0) / (c1 - c0);
            let (t0, t1) = (times[k - 1], times[k]);
            return Some(if t0 > T::zero() { (t0.ln() + f * (t1.ln() - t0.ln())).exp() } else { t0 + f * (t1 - t0) });
        }
    }
    None
}

/// Unweighted least squares of `ln t_θ` against `r` or `ln r`, over the
/// defined crossings with `r ≥ r_min`.
pub fn fit_lightcone<T: Real>(
    crossings: &[(i64, Option<T>)],
    theta: T,
    model: LightConeModel,
    r_min: i64,
) -> Result<LightConeFit<T>> {
    let points: Vec<(i64, T)> =
        crossings.iter().filter(|(r, _)| *r >= r_min && *r > 0).filter_map(|&(r, t)| t.map(|t| (r, t))).collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "light-cone fit needs at least 3 crossings with r >= {r_min}, found {}",
            points.len()
        )));
    }
    let xs: Vec<T> = points
        .iter()
        .map(|&(r, _)| {
            let r = T::from_i64(r).expect("distance fits");
            match model {
                LightConeModel::Exponential => r,
                LightConeModel::Algebraic => r.ln(),
            }
        })
        .collect();
    let ys: Vec<T> = points.iter().map(|&(_, t)| t.ln()).collect();
    let n = T::from_usize(xs.len()).expect("count fits");
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<T>();
    let sxy = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum::<T>();
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let rss = xs.iter().zip(&ys).map(|(&x, &y)| (y - intercept - beta * x).powi(2)).sum::<T>();
    let beta_stderr = (rss / (n - T::two()) / sxx).sqrt();
    Ok(LightConeFit { theta, model, r_min, points, beta, beta_stderr, intercept, rss })
}
