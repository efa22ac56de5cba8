use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{KrylovOptions, Propagator, SpectralPropagator, TimeGrid, DEFAULT_DENSE_CAP};
use crate::model::{build_hamiltonian, build_ising_hamiltonian, sample_disorder, Axis, ChainSpec, SectorBasis};
use crate::otoc::{check_sites, otoc_exact_trace, otoc_typicality, sites_right_of, OtocSeries, DEFAULT_TRACE_CAP};
use crate::rng::{derive_seed, DISORDER_STREAM, HAAR_STREAM};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Xxz,
    Ising,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EstimatorConfig {
    /// `n_haar = None` picks [`default_n_haar`].
    Typicality {
        #[serde(default)]
        n_haar: Option<usize>,
    },
    ExactTrace {
        #[serde(default = "default_trace_cap")]
        cap: usize,
    },
}

fn default_trace_cap() -> usize {
    DEFAULT_TRACE_CAP
}

/// Number of Haar states: 10 from `N = 10` up, doubled for each site below.
pub fn default_n_haar(n_sites: usize) -> usize {
    10 << 10usize.saturating_sub(n_sites)
}

/// What to compute for each disorder realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OtocConfig {
    pub axis: Axis,
    /// Zero-based probe site.
    pub probe: usize,
    /// Measured sites; all sites right of the probe when absent.
    pub sites: Option<Vec<usize>>,
    pub grid: TimeGrid,
    pub estimator: EstimatorConfig,
    pub model: ModelKind,
    /// Number of up spins of the magnetization sector to restrict to.
    pub sector: Option<usize>,
}

impl Default for OtocConfig {
    fn default() -> Self {
        Self {
            axis: Axis::X,
            probe: 2,
            sites: None,
            grid: TimeGrid::default(),
            estimator: EstimatorConfig::Typicality { n_haar: None },
            model: ModelKind::Xxz,
            sector: None,
        }
    }
}

impl OtocConfig {
    pub fn sites_for(&self, n_sites: usize) -> Vec<usize> {
        self.sites.clone().unwrap_or_else(|| sites_right_of(n_sites, self.probe))
    }

    /// Checks sites, grid, estimator and sector against a chain of `n_sites`.
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        check_sites(n_sites, self.probe, &self.sites_for(n_sites))?;
        self.grid.validate()?;
        match self.estimator {
            EstimatorConfig::Typicality { n_haar: Some(0) } => {
                return Err(Error::InvalidArgument("n_haar must be at least 1".into()))
            }
            EstimatorConfig::ExactTrace { cap } if cap == 0 => {
                return Err(Error::InvalidArgument("trace cap must be positive".into()))
            }
            _ => {}
        }
        if let Some(n_up) = self.sector {
            SectorBasis::new(n_sites, n_up)?;
            if self.axis != Axis::Z {
                return Err(Error::LeavesSector);
            }
            if self.model == ModelKind::Ising {
                return Err(Error::InvalidArgument("the Ising model is only built in the full basis".into()));
            }
        }
        Ok(())
    }
}

/// Per-realization series of one disorder ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleResult<T = f64> {
    pub spec: ChainSpec<T>,
    pub strength: T,
    pub master_seed: u64,
    pub series: Vec<OtocSeries<T>>,
}

impl<T: Real> EnsembleResult<T> {
    pub fn n_realizations(&self) -> usize {
        self.series.len()
    }

    pub fn times(&self) -> &[T] {
        &self.series[0].times
    }

    pub fn distances(&self) -> &[i64] {
        &self.series[0].distances
    }

    /// Grid index closest to `t` on a logarithmic scale.
    pub fn time_index(&self, t: T) -> usize {
        let dist = |s: T| if s > T::zero() && t > T::zero() { (s.ln() - t.ln()).abs() } else { (s - t).abs() };
        let times = self.times();
        (0..times.len()).min_by(|&a, &b| dist(times[a]).partial_cmp(&dist(times[b])).expect("finite")).unwrap_or(0)
    }

    /// `C(r, t_k)` across realizations, in realization order.
    pub fn samples(&self, r: i64, k: usize) -> Result<Vec<T>> {
        let row = self
            .distances()
            .iter()
            .position(|&d| d == r)
            .ok_or_else(|| Error::InvalidArgument(format!("distance {r} not in the ensemble")))?;
        Ok(self.series.iter().map(|s| s.values[[row, k]]).collect())
    }
}

/// Series of realization `index`: disorder seeded by
/// `derive_seed(master, DISORDER_STREAM, index)`. Haar states depend on the
/// master seed only, so realizations differ by their disorder alone.
pub fn run_realization<T: Real>(
    spec: &ChainSpec<T>,
    strength: T,
    index: usize,
    config: &OtocConfig,
    master_seed: u64,
) -> Result<OtocSeries<T>> {
    config.validate(spec.n_sites)?;
    let seed = derive_seed(master_seed, DISORDER_STREAM, index as u64);
    let disorder = sample_disorder(strength, spec.n_sites, seed)?;
    let sector = config.sector.map(|n_up| SectorBasis::new(spec.n_sites, n_up)).transpose()?;
    let h = match config.model {
        ModelKind::Xxz => build_hamiltonian(spec, &disorder, sector.as_ref())?,
        ModelKind::Ising => build_ising_hamiltonian(spec, &disorder)?,
    };
    let sites = config.sites_for(spec.n_sites);
    let times: Vec<T> = config.grid.times();
    let series = match config.estimator {
        EstimatorConfig::Typicality { n_haar } => {
            let n_haar = n_haar.unwrap_or_else(|| default_n_haar(spec.n_sites));
            let prop = Propagator::for_hamiltonian(h, DEFAULT_DENSE_CAP, KrylovOptions::default())?;
            let haar_seed = derive_seed(master_seed, HAAR_STREAM, 0);
            otoc_typicality(&prop, config.probe, &sites, config.axis, &times, n_haar, haar_seed)?
        }
        EstimatorConfig::ExactTrace { cap } => {
            let sp = SpectralPropagator::diagonalize(&h)?;
            otoc_exact_trace(&sp, config.probe, &sites, config.axis, &times, cap)?
        }
    };
    Ok(series.with_spec(spec.clone()).with_disorder_seeds(vec![seed]))
}

/// Runs `n` realizations in parallel; the result is independent of the
/// worker count. `progress` is called once per finished realization.
pub fn run_disorder_ensemble<T: Real>(
    spec: &ChainSpec<T>,
    strength: T,
    n: usize,
    config: &OtocConfig,
    master_seed: u64,
    progress: Option<&(dyn Fn(usize) + Sync)>,
) -> Result<EnsembleResult<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ensemble needs at least one realization".into()));
    }
    spec.validate()?;
    config.validate(spec.n_sites)?;
    let series = (0..n)
        .into_par_iter()
        .map(|r| {
            let s = run_realization(spec, strength, r, config, master_seed);
            if let Some(p) = progress {
                p(r);
            }
            s
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleResult { spec: spec.clone(), strength, master_seed, series })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_requires_sz() {
        let mut cfg = OtocConfig { sector: Some(3), ..OtocConfig::default() };
        assert_eq!(cfg.validate(6), Err(Error::LeavesSector));
        cfg.axis = Axis::Z;
        assert!(cfg.validate(6).is_ok());
        cfg.sector = Some(7);
        assert!(matches!(cfg.validate(6), Err(Error::InvalidSector { .. })));
    }

    #[test]
    fn sector_ensemble_runs_and_rejects_transverse_axes() {
        let spec = ChainSpec::power_law(6, 3.0, -2.0).unwrap();
        let base = OtocConfig {
            axis: Axis::Z,
            grid: TimeGrid::Explicit { times: vec![0.5, 2.0] },
            estimator: EstimatorConfig::ExactTrace { cap: 64 },
            ..OtocConfig::default()
        };
        let sector = OtocConfig { sector: Some(3), ..base.clone() };
        let full = run_realization(&spec, 2.0, 0, &base, 7).unwrap();
        let part = run_realization(&spec, 2.0, 0, &sector, 7).unwrap();
        // Same disorder; the sector trace differs from the full trace but stays in range.
        assert_eq!(full.metadata.disorder_seeds, part.metadata.disorder_seeds);
        assert!(part.values.iter().all(|&c| (0.0..=4.0 + 1e-9).contains(&c)));
        assert!(run_disorder_ensemble(&spec, 2.0, 2, &OtocConfig { sector: Some(3), ..OtocConfig::default() }, 1, None).is_err());
    }
}
