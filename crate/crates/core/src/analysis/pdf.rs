use serde::{Deserialize, Serialize};

use super::EnsembleResult;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PdfOptions {
    pub bins: usize,
    pub lower: f64,
    pub upper: f64,
    pub kde_points: usize,
    /// Maxima below this fraction of the largest density are noise.
    pub mode_floor: f64,
}

impl Default for PdfOptions {
    fn default() -> Self {
        Self { bins: 80, lower: 0.0, upper: 4.0, kde_points: 401, mode_floor: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate<T = f64> {
    pub edges: Vec<T>,
    /// Histogram density; `Σ density · width = 1`.
    pub histogram: Vec<T>,
    pub grid: Vec<T>,
    pub kde: Vec<T>,
    pub bandwidth: T,
    /// Locations of the KDE modes.
    pub modes: Vec<T>,
}

impl<T: Real> DensityEstimate<T> {
    pub fn occupied_bins(&self) -> usize {
        self.histogram.iter().filter(|&&d| d > T::zero()).count()
    }
}

/// Local maxima of `density` above `floor · max`. Plateaus count once.
pub fn count_modes<T: Real>(grid: &[T], density: &[T], floor: T) -> Vec<T> {
    let max = density.iter().copied().fold(T::zero(), T::max);
    if max <= T::zero() {
        return vec![];
    }
    let n = density.len();
    let mut modes = Vec::new();
    let mut k = 0;
    while k < n {
        let mut end = k;
        while end + 1 < n && density[end + 1] == density[k] {
            end += 1;
        }
        let left_lower = k == 0 || density[k - 1] < density[k];
        let right_lower = end + 1 == n || density[end + 1] < density[k];
        if left_lower && right_lower && density[k] >= floor * max {
            modes.push(grid[(k + end) / 2]);
        }
        k = end + 1;
    }
    modes
}

/// Histogram plus Gaussian KDE (Silverman bandwidth, reflected at the
/// interval ends). A degenerate sample uses the bin width as bandwidth.
pub fn density_from_samples<T: Real>(samples: &[T], opts: &PdfOptions) -> Result<DensityEstimate<T>> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    if opts.bins == 0 || opts.kde_points < 2 || !(opts.upper > opts.lower) {
        return Err(Error::InvalidArgument("invalid density options".into()));
    }
    let lo = T::lit(opts.lower);
    let hi = T::lit(opts.upper);
    let bins = opts.bins;
    let width = (hi - lo) / T::from_usize(bins).expect("bins fit");
    let edges: Vec<T> = (0..=bins).map(|k| lo + width * T::from_usize(k).expect("fits")).collect();
    let n = T::from_usize(samples.len()).expect("count fits");
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let k = ((x - lo) / width).floor().to_isize().unwrap_or(0).clamp(0, bins as isize - 1) as usize;
        counts[k] += 1;
    }
    let histogram: Vec<T> = counts.iter().map(|&c| T::from_usize(c).expect("fits") / (n * width)).collect();

    let mean = samples.iter().copied().sum::<T>() / n;
    let sd = if samples.len() > 1 {
        (samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / (n - T::one())).sqrt()
    } else {
        T::zero()
    };
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let quantile = |q: f64| {
        let pos = q * (sorted.len() - 1) as f64;
        let (i, f) = (pos.floor() as usize, T::lit(pos - pos.floor()));
        let j = (i + 1).min(sorted.len() - 1);
        sorted[i] + f * (sorted[j] - sorted[i])
    };
    let iqr = quantile(0.75) - quantile(0.25);
    let spread = if iqr > T::zero() { sd.min(iqr / T::lit(1.34)) } else { sd };
    let mut bandwidth = T::lit(0.9) * spread * n.powf(T::lit(-0.2));
    if !(bandwidth > T::zero()) {
        bandwidth = width;
    }
    let step = (hi - lo) / T::from_usize(opts.kde_points - 1).expect("fits");
    let grid: Vec<T> = (0..opts.kde_points).map(|k| lo + step * T::from_usize(k).expect("fits")).collect();
    let norm = T::one() / (n * bandwidth * (T::two() * T::PI()).sqrt());
    let kernel = |u: T| (-(u * u) / T::two()).exp();
    let kde: Vec<T> = grid
        .iter()
        .map(|&g| {
            samples
                .iter()
                .map(|&x| {
                    kernel((g - x) / bandwidth)
                        + kernel((g - (T::two() * lo - x)) / bandwidth)
                        + kernel((g - (T::two() * hi - x)) / bandwidth)
                })
                .sum::<T>()
                * norm
        })
        .collect();
    let modes = count_modes(&grid, &kde, T::lit(opts.mode_floor));
    Ok(DensityEstimate { edges, histogram, grid, kde, bandwidth, modes })
}

/// Density of `C(r, t)` across the ensemble at the grid time nearest `t`.
pub fn estimate_pdf<T: Real>(result: &EnsembleResult<T>, r: i64, t: T, opts: &PdfOptions) -> Result<DensityEstimate<T>> {
    let k = result.time_index(t);
    density_from_samples(&result.samples(r, k)?, opts)
}
