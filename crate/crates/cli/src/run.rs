use std::sync::atomic::{AtomicUsize, Ordering};

use ndarray::Array2;
use scramble_core::analysis::{
    density_from_samples, ensemble_mean_sem, estimate_pdf, fit_lightcone, run_disorder_ensemble, sampling_study,
    slow_fraction, threshold_crossings, EstimatorConfig, LightConeFit, LightConeModel, ModelKind, OtocConfig,
    PdfOptions, PoolSummary, SamplingRow,
};
use scramble_core::evolve::{Propagator, SpectralPropagator};
use scramble_core::floquet::{toggling_average, EchoRunner};
use scramble_core::model::{build_hamiltonian, sample_disorder, ChainSpec, Interaction};
use scramble_core::otoc::{ising_otoc_closed_form, otoc_state};
use scramble_core::rng::{derive_seed, DISORDER_STREAM};
use scramble_core::{analysis::neel_state, Ensemble, Error};
use serde::Serialize;

use crate::config::{
    DistributionsSection, EnsembleSection, FloquetSection, IsingSection, LightconeSection, Params, SamplingSection,
    SlowFractionSection,
};
use crate::error::CliError;
use crate::output::{cell, Output};

/// Realization counter printed to stderr roughly every tenth of the run.
pub struct Progress {
    label: String,
    total: usize,
    done: AtomicUsize,
    quiet: bool,
}

impl Progress {
    pub fn new(label: impl Into<String>, total: usize, quiet: bool) -> Self {
        Self { label: label.into(), total, done: AtomicUsize::new(0), quiet }
    }

    pub fn tick(&self) {
        let d = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        let step = (self.total / 10).max(1);
        if !self.quiet && (d % step == 0 || d == self.total) {
            eprintln!("[{}] {d}/{}", self.label, self.total);
        }
    }
}

pub struct Context {
    pub seed: u64,
    pub quiet: bool,
}

impl Context {
    fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    fn ensemble(&self, label: &str, spec: &ChainSpec, h: f64, n: usize, otoc: &OtocConfig) -> Result<Ensemble, CliError> {
        let progress = Progress::new(label, n, self.quiet);
        let tick = |_| progress.tick();
        Ok(run_disorder_ensemble(spec, h, n, otoc, self.seed, Some(&tick))?)
    }
}

pub fn run(params: &Params, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    match params {
        Params::Lightcone(s) => lightcone(s, ctx, out),
        Params::Distributions(s) => distributions(s, ctx, out),
        Params::SlowFraction(s) => slow_fraction_study(s, ctx, out),
        Params::FloquetCheck(s) => floquet_check(s, ctx, out),
        Params::SamplingStudy(s) => sampling(s, ctx, out),
        Params::IsingOracle(s) => ising_oracle(s, ctx, out),
    }
}

fn chains(e: &EnsembleSection) -> [(&'static str, ChainSpec); 2] {
    [("nn", e.nearest_neighbor()), ("pl", e.power_law())]
}

fn write_mean(out: &mut Output, stem: &str, ens: &Ensemble) -> Result<Array2<f64>, CliError> {
    let ms = ensemble_mean_sem(ens)?;
    out.series_csv(&format!("{stem}.csv"), ens.times(), ens.distances(), &ms.mean)?;
    if let Some(sem) = &ms.sem {
        out.series_csv(&format!("{stem}_sem.csv"), ens.times(), ens.distances(), sem)?;
    }
    Ok(ms.mean)
}

#[derive(Serialize)]
struct Crossing {
    r: i64,
    time: Option<f64>,
}

#[derive(Serialize)]
struct ThresholdFits {
    theta: f64,
    crossings: Vec<Crossing>,
    exponential: Option<LightConeFit>,
    algebraic: Option<LightConeFit>,
    /// Why a fit is missing, e.g. too few crossings.
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ChainFits {
    chain: &'static str,
    spec: ChainSpec,
    thresholds: Vec<ThresholdFits>,
}

fn fit_or_note(
    crossings: &[(i64, Option<f64>)],
    theta: f64,
    model: LightConeModel,
    r_min: i64,
    notes: &mut Vec<String>,
) -> Result<Option<LightConeFit>, CliError> {
    match fit_lightcone(crossings, theta, model, r_min) {
        Ok(f) => Ok(Some(f)),
        Err(Error::InsufficientData(msg)) => {
            notes.push(format!("{model:?}: {msg}").to_lowercase());
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn lightcone(s: &LightconeSection, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let mut fits = Vec::new();
    for (tag, spec) in chains(&s.ensemble) {
        let ens = ctx.ensemble(&format!("lightcone {tag}"), &spec, s.ensemble.disorder, s.ensemble.realizations, &s.ensemble.otoc)?;
        let mean = write_mean(out, &format!("lightcone_{tag}"), &ens)?;
        let mut thresholds = Vec::new();
        for &theta in &s.thresholds {
            let crossings: Vec<(i64, Option<f64>)> = ens
                .distances()
                .iter()
                .enumerate()
                .map(|(k, &r)| (r, threshold_crossings(mean.row(k), ens.times(), theta)))
                .collect();
            let mut notes = Vec::new();
            let exponential = fit_or_note(&crossings, theta, LightConeModel::Exponential, s.r_min, &mut notes)?;
            let algebraic = fit_or_note(&crossings, theta, LightConeModel::Algebraic, s.r_min, &mut notes)?;
            thresholds.push(ThresholdFits {
                theta,
                crossings: crossings.into_iter().map(|(r, time)| Crossing { r, time }).collect(),
                exponential,
                algebraic,
                notes,
            });
        }
        fits.push(ChainFits { chain: tag, spec, thresholds });
    }
    out.json("fits.json", &serde_json::json!({ "chains": fits }))
}

#[derive(Serialize)]
struct TimeDensity {
    time: f64,
    bandwidth: f64,
    modes: Vec<f64>,
}

/// Histogram density of `C(r, t)` per grid time: one row per time, one
/// column per bin centre.
fn density_matrix(out: &mut Output, name: &str, ens: &Ensemble, r: i64, pdf: &PdfOptions) -> Result<Vec<TimeDensity>, CliError> {
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut header = vec!["time".to_string()];
    for (k, &t) in ens.times().iter().enumerate() {
        let d = density_from_samples(&ens.samples(r, k)?, pdf)?;
        if k == 0 {
            header.extend(d.edges.windows(2).map(|w| format!("c{}", (w[0] + w[1]) / 2.0)));
        }
        rows.push(std::iter::once(cell(Some(t))).chain(d.histogram.iter().map(|&v| cell(Some(v)))).collect());
        summary.push(TimeDensity { time: t, bandwidth: d.bandwidth, modes: d.modes });
    }
    out.csv(name, &header, &rows)?;
    Ok(summary)
}

fn distributions(s: &DistributionsSection, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let mut chains_json = Vec::new();
    for (tag, spec) in chains(&s.ensemble) {
        let ens =
            ctx.ensemble(&format!("distributions {tag}"), &spec, s.ensemble.disorder, s.ensemble.realizations, &s.ensemble.otoc)?;
        write_mean(out, &format!("distributions_{tag}_mean"), &ens)?;
        let densities = density_matrix(out, &format!("distributions_{tag}.csv"), &ens, s.distance, &s.pdf)?;
        chains_json.push(serde_json::json!({ "chain": tag, "spec": spec, "distance": s.distance, "densities": densities }));
    }
    out.json("distributions.json", &serde_json::json!({ "chains": chains_json }))
}

fn slow_fraction_study(s: &SlowFractionSection, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let mut chains_json = Vec::new();
    let mut fractions = Vec::new();
    for (tag, spec) in chains(&s.ensemble) {
        let ens =
            ctx.ensemble(&format!("slow-fraction {tag}"), &spec, s.ensemble.disorder, s.ensemble.realizations, &s.ensemble.otoc)?;
        write_mean(out, &format!("slow_fraction_{tag}"), &ens)?;
        let k = ens.time_index(s.time);
        let grid_time = ens.times()[k];
        let fraction = slow_fraction(&ens, s.distance, s.time, s.cutoff_exponent)?;
        let cutoff = ising_otoc_closed_form(s.cutoff_exponent, spec.coupling, s.distance.unsigned_abs() as usize, grid_time)?;
        let pdf = estimate_pdf(&ens, s.distance, s.time, &s.pdf)?;
        fractions.push(fraction);
        chains_json.push(serde_json::json!({
            "chain": tag,
            "spec": spec,
            "grid_time": grid_time,
            "cutoff": cutoff,
            "slow_fraction": fraction,
            "modes": pdf.modes,
            "samples": ens.samples(s.distance, k)?,
        }));
    }
    let ratio = if fractions[1] > 0.0 { Some(fractions[0] / fractions[1]) } else { None };
    out.json(
        "slow_fraction.json",
        &serde_json::json!({ "distance": s.distance, "time": s.time, "ratio_nn_over_pl": ratio, "chains": chains_json }),
    )
}

#[derive(Serialize)]
struct SequenceReport {
    sequence: String,
    max_deviation: f64,
    weights: [f64; 3],
    couplings: [f64; 3],
    fields: [f64; 3],
    first_order_norm: f64,
    effective_coupling: f64,
    effective_anisotropy: f64,
    max_transverse_field: f64,
}

fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn floquet_check(s: &FloquetSection, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let spec = s.chain();
    let disorder = sample_disorder(s.disorder, s.n_sites, derive_seed(ctx.seed, DISORDER_STREAM, s.realization))?;
    let times: Vec<f64> = (1..=s.cycles).map(|k| k as f64 * s.cycle_time).collect();
    let psi = neel_state::<f64>(s.state.axis, s.n_sites);
    let label = format!("neel-{}", s.state.axis);
    let sites = s.sites();
    let mut reports = Vec::new();
    for kind in &s.sequences {
        let seq = kind.build(s.anisotropy, s.cycle_time)?;
        ctx.note(&format!("[floquet-check] {}", seq.name));
        let avg = toggling_average(&seq, &spec, &disorder)?;
        let (target, target_disorder) = avg.effective_xxz(&spec, &disorder)?;
        let prop = Propagator::Spectral(SpectralPropagator::diagonalize(&build_hamiltonian(&target, &target_disorder, None)?)?);
        let exact = otoc_state(&prop, &psi, s.probe, &sites, s.state.axis, &times, &label)?;
        let echo = EchoRunner::new(&spec, &disorder, s.scale, Some(&seq), s.flip_disorder)?.series(
            &psi,
            s.probe,
            &sites,
            s.state.axis,
            &times,
        )?;
        out.series_csv(&format!("floquet_{}.csv", seq.name), &times, &echo.distances, &echo.values)?;
        out.series_csv(&format!("floquet_{}_exact.csv", seq.name), &times, &exact.distances, &exact.values)?;
        let f = &avg.factors;
        reports.push(SequenceReport {
            sequence: seq.name.clone(),
            max_deviation: max_abs_diff(&echo.values, &exact.values),
            weights: f.weights,
            couplings: f.couplings,
            fields: f.fields,
            first_order_norm: avg.first_order_norm,
            effective_coupling: target.coupling,
            effective_anisotropy: target.anisotropy,
            max_transverse_field: avg.fields.iter().map(|h| h[0].abs().max(h[1].abs())).fold(0.0, f64::max),
        });
    }
    out.json(
        "floquet.json",
        &serde_json::json!({
            "state": label,
            "disorder_fields": disorder.fields,
            "times": times,
            "sequences": reports,
        }),
    )
}

fn sampling(s: &SamplingSection, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    ctx.note("[sampling-study] running");
    let res = sampling_study(&s.template(), &s.study, ctx.seed)?;
    let header: Vec<String> =
        ["kind", "n_sites", "n_s", "sem", "cost", "cost_weighted_sem"].iter().map(|h| h.to_string()).collect();
    let rows: Vec<Vec<String>> = res
        .rows
        .iter()
        .map(|r: &SamplingRow| {
            vec![
                kind_name(r.kind),
                r.n_sites.to_string(),
                r.n_s.to_string(),
                cell(r.sem),
                r.cost.map(|c| c.to_string()).unwrap_or_default(),
                cell(r.cost_weighted_sem),
            ]
        })
        .collect();
    out.csv("sampling.csv", &header, &rows)?;
    let pools: Vec<&PoolSummary> = res.pools.iter().collect();
    out.json("sampling.json", &serde_json::json!({ "pools": pools, "rows": res.rows }))
}

fn kind_name(kind: scramble_core::analysis::SampleKind) -> String {
    serde_json::to_value(kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[derive(Serialize)]
struct IsingCase {
    exponent: f64,
    disorder: f64,
    /// Largest `|numeric − closed form|` over realizations, distances and times.
    max_deviation: f64,
    /// Largest difference between realizations.
    max_disorder_spread: f64,
}

fn ising_oracle(s: &IsingSection, ctx: &Context, out: &mut Output) -> Result<(), CliError> {
    let otoc = OtocConfig {
        probe: s.probe,
        grid: s.grid.clone(),
        estimator: EstimatorConfig::ExactTrace { cap: 1 << s.n_sites },
        model: ModelKind::Ising,
        ..OtocConfig::default()
    };
    let mut cases = Vec::new();
    for &alpha in &s.exponents {
        let spec = ChainSpec::new(s.n_sites, Interaction::PowerLaw { exponent: alpha }, s.coupling, 0.0)?;
        let mut closed_written = false;
        for &h in &s.disorders {
            let ens = ctx.ensemble(&format!("ising-oracle alpha={alpha} h={h}"), &spec, h, s.realizations, &otoc)?;
            let first = &ens.series[0];
            let mut closed = first.values.clone();
            for ((k, m), v) in closed.indexed_iter_mut() {
                *v = ising_otoc_closed_form(alpha, s.coupling, first.distances[k].unsigned_abs() as usize, first.times[m])?;
            }
            if !closed_written {
                out.series_csv(&format!("ising_closed_a{alpha}.csv"), &first.times, &first.distances, &closed)?;
                closed_written = true;
            }
            let mean = write_mean(out, &format!("ising_numeric_a{alpha}_h{h}"), &ens)?;
            let max_deviation = ens.series.iter().map(|x| max_abs_diff(&x.values, &closed)).fold(max_abs_diff(&mean, &closed), f64::max);
            let max_disorder_spread = ens.series.iter().map(|x| max_abs_diff(&x.values, &first.values)).fold(0.0, f64::max);
            cases.push(IsingCase { exponent: alpha, disorder: h, max_deviation, max_disorder_spread });
        }
    }
    let overall = cases.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    ctx.note(&format!("[ising-oracle] max |numeric - closed form| = {overall:e}"));
    out.json("ising.json", &serde_json::json!({ "max_deviation": overall, "cases": cases }))
}
