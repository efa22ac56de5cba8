//! Disorder ensembles and the statistics built on them.

mod ensemble;
mod lightcone;
mod pdf;
mod sampling;
mod states;
mod stats;

pub use ensemble::{
    default_n_haar, run_disorder_ensemble, run_realization, EnsembleResult, EstimatorConfig, ModelKind, OtocConfig,
};
pub use lightcone::{fit_lightcone, threshold_crossings, LightConeFit, LightConeModel};
pub use pdf::{count_modes, density_from_samples, estimate_pdf, DensityEstimate, PdfOptions};
pub use sampling::{sampling_study, PoolSummary, SampleKind, SamplingRow, SamplingStudyConfig, SamplingStudyResult};
pub use states::{
    neel_state, product_state, project_to_sector, random_bitstring_state, random_product_state,
    sector_bitstring_state, single_spin_eigenstate,
};
pub use stats::{ensemble_mean_sem, mean_and_sem, slow_fraction, MeanSem};
