use serde::{Deserialize, Serialize};

use super::states::{project_to_sector, random_product_state, sector_bitstring_state};
use super::stats::mean_and_sem;
use crate::error::{Error, Result};
use crate::evolve::{KrylovOptions, Propagator, SpinState, TimeGrid, DEFAULT_DENSE_CAP};
use crate::model::{build_hamiltonian, Axis, Basis, ChainSpec, DisorderRealization, SectorBasis};
use crate::otoc::{haar_state, state_commutator_norms};
use crate::rng::{derive_seed, SAMPLING_STREAM};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    Haar,
    RandomBitstring,
    RandomProduct,
}

impl SampleKind {
    pub const ALL: [SampleKind; 3] = [SampleKind::Haar, SampleKind::RandomBitstring, SampleKind::RandomProduct];

    /// Measurements needed for `n_s` states; Haar states are not preparable.
    pub fn cost(self, n_sites: usize, n_s: usize) -> Option<usize> {
        match self {
            SampleKind::Haar => None,
            SampleKind::RandomBitstring => Some(n_s),
            SampleKind::RandomProduct => Some(n_sites * n_s),
        }
    }

    fn tag(self) -> u64 {
        self as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingStudyConfig {
    pub sizes: Vec<usize>,
    pub sample_counts: Vec<usize>,
    /// States drawn per (kind, size) to estimate the spread of `C̄_z`.
    pub pool_size: usize,
    pub kinds: Vec<SampleKind>,
    pub grid: TimeGrid,
    /// Zero-based probe site; all other sites are measured.
    pub probe: usize,
    pub dense_cap: usize,
}

impl Default for SamplingStudyConfig {
    fn default() -> Self {
        Self {
            sizes: vec![13, 15],
            sample_counts: vec![1, 4, 16, 64],
            pool_size: 64,
            kinds: SampleKind::ALL.to_vec(),
            grid: TimeGrid::Linear { start: 0.1, end: 2.0, points: 20 },
            probe: 2,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingRow<T = f64> {
    pub kind: SampleKind,
    pub n_sites: usize,
    pub n_s: usize,
    /// `σ̂ / √n_s`; absent for `n_s = 1`.
    pub sem: Option<T>,
    pub cost: Option<usize>,
    /// SEM at a fixed measurement budget equal to `n_s`: `σ̂ √(cost / n_s) / √n_s`.
    pub cost_weighted_sem: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolSummary<T = f64> {
    pub kind: SampleKind,
    pub n_sites: usize,
    pub mean: T,
    pub std_dev: T,
    pub values: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingStudyResult<T = f64> {
    pub seed: u64,
    pub pools: Vec<PoolSummary<T>>,
    pub rows: Vec<SamplingRow<T>>,
}

impl<T: Real> SamplingStudyResult<T> {
    pub fn row(&self, kind: SampleKind, n_sites: usize, n_s: usize) -> Option<&SamplingRow<T>> {
        self.rows.iter().find(|r| r.kind == kind && r.n_sites == n_sites && r.n_s == n_s)
    }
}

fn draw_state<T: Real>(kind: SampleKind, sector: &SectorBasis, seed: u64) -> Result<SpinState<T>> {
    match kind {
        SampleKind::Haar => Ok(haar_state(&Basis::sector(sector.clone()), seed)),
        SampleKind::RandomBitstring => Ok(sector_bitstring_state(sector, seed)),
        SampleKind::RandomProduct => project_to_sector(&random_product_state(sector.n_sites(), seed), sector),
    }
}

/// Spread of the time- and distance-averaged `σᶻ` commutator over initial
/// states, on the ordered chain in its largest magnetization sector.
pub fn sampling_study<T: Real>(
    template: &ChainSpec<T>,
    config: &SamplingStudyConfig,
    seed: u64,
) -> Result<SamplingStudyResult<T>> {
    config.grid.validate()?;
    if config.pool_size < 2 {
        return Err(Error::InvalidArgument("pool_size must be at least 2".into()));
    }
    let times: Vec<T> = config.grid.times();
    let mut pools = Vec::new();
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let spec = template.with_sites(n)?;
        let sector = SectorBasis::largest(n)?;
        let h = build_hamiltonian(&spec, &DisorderRealization::clean(n), Some(&sector))?;
        let prop = Propagator::for_hamiltonian(h, config.dense_cap, KrylovOptions::default())?;
        let sites: Vec<usize> = (0..n).filter(|&j| j != config.probe).collect();
        for &kind in &config.kinds {
            let states = (0..config.pool_size)
                .map(|k| {
                    let index = (n as u64) << 40 | kind.tag() << 32 | k as u64;
                    draw_state(kind, &sector, derive_seed(seed, SAMPLING_STREAM, index))
                })
                .collect::<Result<Vec<SpinState<T>>>>()?;
            let norms = state_commutator_norms(&prop, &states, config.probe, &sites, Axis::Z, &times)?;
            let values: Vec<T> = norms
                .iter()
                .map(|m| m.sum() / T::from_usize(m.len()).expect("count fits"))
                .collect();
            let (mean, sem) = mean_and_sem(&values);
            let pool = T::from_usize(values.len()).expect("count fits");
            let std_dev = sem.expect("pool has at least two states") * pool.sqrt();
            for &n_s in &config.sample_counts {
                let sem = (n_s > 1).then(|| std_dev / T::from_usize(n_s).expect("fits").sqrt());
                let cost = kind.cost(n, n_s);
                let cost_weighted_sem = match (sem, cost) {
                    (Some(s), Some(c)) => Some(s * (T::from_usize(c).expect("fits") / T::from_usize(n_s).expect("fits")).sqrt()),
                    _ => None,
                };
                rows.push(SamplingRow { kind, n_sites: n, n_s, sem, cost, cost_weighted_sem });
            }
            pools.push(PoolSummary { kind, n_sites: n, mean, std_dev, values });
        }
    }
    Ok(SamplingStudyResult { seed, pools, rows })
}
