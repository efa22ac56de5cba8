//! Out-of-time-order commutators `C(r,t) = ‖[σᵃ_i(t), σᵃ_j]‖²`.
//!
//! All estimators share the evaluation `C = ‖W B ψ − B W ψ‖²` with
//! `W = σᵃ_i(t)` and `B = σᵃ_j`. For Pauli operators this equals
//! `2 − 2 Re⟨ψ|W B W B|ψ⟩` for every state, so the quadratic form and the
//! real-part form coincide; both are available through [`otoc_from_correlator`].

mod exact;
mod kernel;
mod series;

pub use exact::{otoc_exact_trace, DEFAULT_TRACE_CAP};
pub use kernel::{haar_state, otoc_state, otoc_typicality, state_commutator_norms};
pub use series::short_time_otoc;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Axis, ChainSpec};
use crate::scalar::Real;

/// Estimator that produced a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Estimator {
    Typicality { n_haar: usize, seed: u64 },
    ExactTrace,
    SingleState { state: String },
    ShortTimeSeries { order: usize },
    IsingClosedForm,
    /// Forward, kick, scaled backward evolution; `sequence` names the drive.
    Echo { scale: f64, sequence: Option<String>, flip_disorder: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OtocMetadata<T = f64> {
    pub axis: Axis,
    pub probe: usize,
    pub sites: Vec<usize>,
    pub estimator: Estimator,
    pub disorder_seeds: Vec<u64>,
    pub spec: Option<ChainSpec<T>>,
}

/// `C(r,t)` on a (distance × time) grid. Row `k` of `values` belongs to
/// `distances[k] = sites[k] − probe`.
#[derive(Debug, Clone, PartialEq)]
pub struct OtocSeries<T = f64> {
    pub times: Vec<T>,
    pub distances: Vec<i64>,
    pub values: Array2<T>,
    pub metadata: OtocMetadata<T>,
}

impl<T: Real> OtocSeries<T> {
    pub fn new(times: Vec<T>, values: Array2<T>, metadata: OtocMetadata<T>) -> Result<Self> {
        if values.dim() != (metadata.sites.len(), times.len()) {
            return Err(Error::DimensionMismatch { expected: metadata.sites.len() * times.len(), found: values.len() });
        }
        let distances = metadata.sites.iter().map(|&j| j as i64 - metadata.probe as i64).collect();
        Ok(Self { times, distances, values, metadata })
    }

    pub fn with_spec(mut self, spec: ChainSpec<T>) -> Self {
        self.metadata.spec = Some(spec);
        self
    }

    pub fn with_disorder_seeds(mut self, seeds: Vec<u64>) -> Self {
        self.metadata.disorder_seeds = seeds;
        self
    }

    /// Row for distance `r`, if present.
    pub fn row(&self, r: i64) -> Option<ndarray::ArrayView1<'_, T>> {
        self.distances.iter().position(|&d| d == r).map(|k| self.values.row(k))
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }
}

/// `2 − 2 Re F` for an out-of-time-order correlator `F = ⟨W B W B⟩`.
pub fn otoc_from_correlator<T: Real>(re_f: T) -> T {
    T::two() - T::two() * re_f
}

/// Ising light-cone value `2 − 2 cos(4 C_α t / r^α)`.
pub fn ising_otoc_closed_form<T: Real>(alpha: T, c_alpha: T, r: usize, t: T) -> Result<T> {
    if r == 0 {
        return Err(Error::InvalidArgument("distance must be at least 1".into()));
    }
    let r = T::from_usize(r).expect("distance fits");
    let four = T::two() * T::two();
    Ok(T::two() - T::two() * (four * c_alpha * t / r.powf(alpha)).cos())
}

/// Closed-form series with one row per distance `1..=max_r`.
pub fn ising_closed_form_series<T: Real>(
    alpha: T,
    c_alpha: T,
    probe: usize,
    sites: &[usize],
    times: &[T],
) -> Result<OtocSeries<T>> {
    let mut values = Array2::zeros((sites.len(), times.len()));
    for (k, &j) in sites.iter().enumerate() {
        let r = j.abs_diff(probe);
        for (n, &t) in times.iter().enumerate() {
            values[[k, n]] = ising_otoc_closed_form(alpha, c_alpha, r, t)?;
        }
    }
    let metadata = OtocMetadata {
        axis: Axis::X,
        probe,
        sites: sites.to_vec(),
        estimator: Estimator::IsingClosedForm,
        disorder_seeds: vec![],
        spec: None,
    };
    OtocSeries::new(times.to_vec(), values, metadata)
}

pub(crate) fn check_sites(n_sites: usize, probe: usize, sites: &[usize]) -> Result<()> {
    if probe >= n_sites {
        return Err(Error::SiteOutOfRange { site: probe, n_sites });
    }
    if sites.is_empty() {
        return Err(Error::InvalidArgument("at least one measured site is required".into()));
    }
    for &j in sites {
        if j >= n_sites {
            return Err(Error::SiteOutOfRange { site: j, n_sites });
        }
        if j == probe {
            return Err(Error::InvalidArgument(format!("measured site {j} equals the probe site")));
        }
    }
    Ok(())
}

/// Sites to the right of `probe`, i.e. distances `1..N-probe`.
pub fn sites_right_of(n_sites: usize, probe: usize) -> Vec<usize> {
    (probe + 1..n_sites).collect()
}
