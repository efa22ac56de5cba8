use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use scramble_core::analysis::{OtocConfig, PdfOptions, SamplingStudyConfig};
use scramble_core::evolve::TimeGrid;
use scramble_core::floquet::{modified_sequence, wahuha_sequence, PulseSequence};
use scramble_core::model::{Axis, ChainSpec, Interaction};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Output directory used when neither the flag, the file nor the
/// environment names one.
pub const DEFAULT_OUTPUT_DIR: &str = "scramble-output";
pub const OUTPUT_DIR_ENV: &str = "SCRAMBLE_OUTPUT_DIR";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Lightcone,
    Distributions,
    SlowFraction,
    FloquetCheck,
    SamplingStudy,
    IsingOracle,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Lightcone,
        Experiment::Distributions,
        Experiment::SlowFraction,
        Experiment::FloquetCheck,
        Experiment::SamplingStudy,
        Experiment::IsingOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Lightcone => "lightcone",
            Experiment::Distributions => "distributions",
            Experiment::SlowFraction => "slow-fraction",
            Experiment::FloquetCheck => "floquet-check",
            Experiment::SamplingStudy => "sampling-study",
            Experiment::IsingOracle => "ising-oracle",
        }
    }

    /// TOML table holding the experiment's parameters.
    pub fn section(self) -> &'static str {
        match self {
            Experiment::Lightcone => "lightcone",
            Experiment::Distributions => "distributions",
            Experiment::SlowFraction => "slow_fraction",
            Experiment::FloquetCheck => "floquet",
            Experiment::SamplingStudy => "sampling",
            Experiment::IsingOracle => "ising",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Disorder-ensemble comparison of nearest-neighbour and power-law chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSection {
    pub n_sites: usize,
    pub coupling: f64,
    pub anisotropy: f64,
    /// Exponent of the power-law chain compared with the nearest-neighbour one.
    pub exponent: f64,
    pub disorder: f64,
    pub realizations: usize,
    pub otoc: OtocConfig,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self::with(3.0, 14.0, 500)
    }
}

impl EnsembleSection {
    fn with(exponent: f64, disorder: f64, realizations: usize) -> Self {
        Self { n_sites: 13, coupling: 1.0, anisotropy: -2.0, exponent, disorder, realizations, otoc: OtocConfig::default() }
    }

    pub fn nearest_neighbor(&self) -> ChainSpec {
        ChainSpec {
            n_sites: self.n_sites,
            interaction: Interaction::NearestNeighbor,
            coupling: self.coupling,
            anisotropy: self.anisotropy,
            boundary: Default::default(),
        }
    }

    pub fn power_law(&self) -> ChainSpec {
        ChainSpec { interaction: Interaction::PowerLaw { exponent: self.exponent }, ..self.nearest_neighbor() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LightconeSection {
    pub ensemble: EnsembleSection,
    pub thresholds: Vec<f64>,
    /// Smallest distance entering the light-cone fits.
    pub r_min: i64,
}

impl Default for LightconeSection {
    fn default() -> Self {
        Self { ensemble: EnsembleSection::with(3.0, 14.0, 500), thresholds: vec![0.25, 0.5, 1.0], r_min: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistributionsSection {
    pub ensemble: EnsembleSection,
    pub distance: i64,
    pub pdf: PdfOptions,
}

impl Default for DistributionsSection {
    fn default() -> Self {
        Self { ensemble: EnsembleSection::with(3.0, 14.0, 500), distance: 3, pdf: PdfOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SlowFractionSection {
    pub ensemble: EnsembleSection,
    pub distance: i64,
    /// Probe time; the nearest grid time (on a log scale) is used.
    pub time: f64,
    /// Exponent of the Ising cutoff `2 − 2cos(4 J t / r^α)`, shared by both chains.
    pub cutoff_exponent: f64,
    pub pdf: PdfOptions,
}

impl Default for SlowFractionSection {
    fn default() -> Self {
        let mut ensemble = EnsembleSection::with(6.0, 21.0, 1000);
        ensemble.otoc.grid = TimeGrid::Explicit { times: vec![30.0, 100.0, 300.0] };
        Self { ensemble, distance: 3, time: 100.0, cutoff_exponent: 6.0, pdf: PdfOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Modified,
    Wahuha,
}

impl SequenceKind {
    pub fn build(self, anisotropy: f64, cycle_time: f64) -> scramble_core::Result<PulseSequence<f64>> {
        match self {
            SequenceKind::Modified => modified_sequence(anisotropy, cycle_time),
            SequenceKind::Wahuha => wahuha_sequence(anisotropy, cycle_time),
        }
    }
}

/// Initial product state of the echo protocol: alternating `±` eigenstates
/// of `σᵃ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeelState {
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FloquetSection {
    pub n_sites: usize,
    pub coupling: f64,
    pub exponent: f64,
    pub disorder: f64,
    /// Realization index of the shared disorder draw.
    pub realization: u64,
    /// Target anisotropy of the engineered XXZ chain.
    pub anisotropy: f64,
    pub cycle_time: f64,
    /// Evaluation times are `1..=cycles` multiples of the cycle time.
    pub cycles: usize,
    pub sequences: Vec<SequenceKind>,
    pub probe: usize,
    pub sites: Option<Vec<usize>>,
    /// Backward evolution runs under `−scale · H` for `t / scale`.
    pub scale: f64,
    pub flip_disorder: bool,
    pub state: NeelState,
}

impl Default for FloquetSection {
    fn default() -> Self {
        Self {
            n_sites: 13,
            coupling: 1.0,
            exponent: 3.0,
            disorder: 14.0,
            realization: 0,
            anisotropy: 0.5,
            cycle_time: 0.1,
            cycles: 20,
            sequences: vec![SequenceKind::Modified, SequenceKind::Wahuha],
            probe: 2,
            sites: None,
            scale: 1.0,
            flip_disorder: true,
            state: NeelState { axis: Axis::X },
        }
    }
}

impl FloquetSection {
    /// Lab chain; the drive engineers the anisotropy.
    pub fn chain(&self) -> ChainSpec {
        ChainSpec {
            n_sites: self.n_sites,
            interaction: Interaction::PowerLaw { exponent: self.exponent },
            coupling: self.coupling,
            anisotropy: 0.0,
            boundary: Default::default(),
        }
    }

    pub fn sites(&self) -> Vec<usize> {
        self.sites.clone().unwrap_or_else(|| (self.probe + 1..self.n_sites).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub coupling: f64,
    pub anisotropy: f64,
    pub exponent: f64,
    pub study: SamplingStudyConfig,
}

impl Default for SamplingSection {
    fn default() -> Self {
        Self { coupling: 1.0, anisotropy: -2.0, exponent: 3.0, study: SamplingStudyConfig::default() }
    }
}

impl SamplingSection {
    pub fn template(&self) -> ChainSpec {
        ChainSpec {
            n_sites: self.study.sizes.first().copied().unwrap_or(2),
            interaction: Interaction::PowerLaw { exponent: self.exponent },
            coupling: self.coupling,
            anisotropy: self.anisotropy,
            boundary: Default::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IsingSection {
    pub n_sites: usize,
    pub coupling: f64,
    pub exponents: Vec<f64>,
    pub disorders: Vec<f64>,
    pub realizations: usize,
    pub probe: usize,
    pub grid: TimeGrid,
}

impl Default for IsingSection {
    fn default() -> Self {
        Self {
            n_sites: 8,
            coupling: 1.0,
            exponents: vec![3.0, 6.0],
            disorders: vec![0.0, 14.0],
            realizations: 20,
            probe: 2,
            grid: TimeGrid::default(),
        }
    }
}

/// Contents of a configuration file. Every table is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub lightcone: LightconeSection,
    pub distributions: DistributionsSection,
    pub slow_fraction: SlowFractionSection,
    pub floquet: FloquetSection,
    pub sampling: SamplingSection,
    pub ising: IsingSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub n_sites: Option<usize>,
    pub disorder: Option<f64>,
    pub realizations: Option<usize>,
    pub anisotropy: Option<f64>,
    pub n_haar: Option<usize>,
}

/// The parameters that determine the numbers of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Params {
    Lightcone(LightconeSection),
    Distributions(DistributionsSection),
    SlowFraction(SlowFractionSection),
    FloquetCheck(FloquetSection),
    SamplingStudy(SamplingSection),
    IsingOracle(IsingSection),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub seed: u64,
    pub params: Params,
    #[serde(skip)]
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl ResolvedConfig {
    pub fn experiment(&self) -> Experiment {
        match self.params {
            Params::Lightcone(_) => Experiment::Lightcone,
            Params::Distributions(_) => Experiment::Distributions,
            Params::SlowFraction(_) => Experiment::SlowFraction,
            Params::FloquetCheck(_) => Experiment::FloquetCheck,
            Params::SamplingStudy(_) => Experiment::SamplingStudy,
            Params::IsingOracle(_) => Experiment::IsingOracle,
        }
    }

    /// SHA-256 of the canonical JSON of seed and parameters. Output
    /// directory and worker count do not enter.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A file on disk together with its text, for line lookups.
#[derive(Debug, Clone, Default)]
pub struct Source {
    pub path: Option<PathBuf>,
    pub text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: cannot read config: {e}", path.display())))?;
        Ok(Self { path: Some(path.to_path_buf()), text })
    }

    fn name(&self) -> String {
        self.path.as_ref().map_or_else(|| "<defaults>".into(), |p| p.display().to_string())
    }

    fn syntax_error(&self, e: toml::de::Error) -> CliError {
        let message = e.message().trim_end().to_string();
        match e.span().map(|s| line_of(&self.text, s.start)) {
            Some(l) => CliError::Config(format!("{}:{l}: {message}", self.name())),
            None => CliError::Config(format!("{}: {message}", self.name())),
        }
    }

    /// Parses the file. A first typed pass reports unknown keys and type
    /// errors with their line; the values then come from the file merged
    /// over the built-in defaults, so a partial table keeps the defaults of
    /// its own experiment for the keys it leaves out.
    pub fn parse(&self) -> Result<FileConfig, CliError> {
        toml::from_str::<FileConfig>(&self.text).map_err(|e| self.syntax_error(e))?;
        let user: toml::Table = toml::from_str(&self.text).map_err(|e| self.syntax_error(e))?;
        let mut merged = serde_json::to_value(FileConfig::default()).expect("defaults serialize");
        merge(&mut merged, serde_json::to_value(user).expect("toml values serialize"));
        serde_json::from_value(merged).map_err(|e| CliError::Config(format!("{}: {e}", self.name())))
    }

    /// Location prefix for the dotted key `path` (`table.sub.key`): the file
    /// line defining it, or a note that it came from defaults or flags.
    pub fn locate(&self, path: &str) -> String {
        match find_key(&self.text, path) {
            Some(line) => format!("{}:{line}: {path}", self.name()),
            None => format!("{}: {path}", self.name()),
        }
    }
}

/// Recursive object merge. Tagged values (objects with a `kind` key)
/// replace the default as a whole.
fn merge(base: &mut serde_json::Value, over: serde_json::Value) {
    match (base, over) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) if !o.contains_key("kind") => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// One-based line of a dotted key, following `[table]` headers and inline
/// dotted keys. Returns the table header line when only the table exists.
fn find_key(text: &str, path: &str) -> Option<usize> {
    let mut table = String::new();
    let mut header_line = None;
    let (parent, leaf) = path.rsplit_once('.').unwrap_or(("", path));
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[').and_then(|l| l.split(']').next()) {
            table = inner.trim_start_matches('[').trim().to_string();
            if table == parent {
                header_line = Some(n + 1);
            }
            continue;
        }
        let Some((key, _)) = line.split_once('=') else { continue };
        let key = key.trim();
        let full = if table.is_empty() { key.to_string() } else { format!("{table}.{key}") };
        if full == path || (table == parent && key == leaf) {
            return Some(n + 1);
        }
        // A parent table given inline, e.g. `otoc = { ... }`.
        if path.starts_with(&format!("{full}.")) {
            return Some(n + 1);
        }
    }
    header_line
}

impl FileConfig {
    /// Picks the section for `experiment` and applies the overrides.
    pub fn resolve(&self, experiment: Experiment, o: &Overrides, source: &Source) -> Result<ResolvedConfig, CliError> {
        if let Some(file_exp) = self.experiment {
            if file_exp != experiment {
                return Err(CliError::Config(format!(
                    "{}: config is for experiment '{file_exp}', not '{experiment}'",
                    source.locate("experiment")
                )));
            }
        }
        let unsupported = |flag: &str| {
            CliError::Config(format!("flag --{flag} does not apply to the {experiment} experiment"))
        };
        let apply_ensemble = |e: &mut EnsembleSection| {
            if let Some(n) = o.n_sites {
                e.n_sites = n;
            }
            if let Some(h) = o.disorder {
                e.disorder = h;
            }
            if let Some(r) = o.realizations {
                e.realizations = r;
            }
            if let Some(a) = o.anisotropy {
                e.anisotropy = a;
            }
            if let Some(n) = o.n_haar {
                e.otoc.estimator = scramble_core::analysis::EstimatorConfig::Typicality { n_haar: Some(n) };
            }
        };
        let params = match experiment {
            Experiment::Lightcone => {
                let mut s = self.lightcone.clone();
                apply_ensemble(&mut s.ensemble);
                Params::Lightcone(s)
            }
            Experiment::Distributions => {
                let mut s = self.distributions.clone();
                apply_ensemble(&mut s.ensemble);
                Params::Distributions(s)
            }
            Experiment::SlowFraction => {
                let mut s = self.slow_fraction.clone();
                apply_ensemble(&mut s.ensemble);
                Params::SlowFraction(s)
            }
            Experiment::FloquetCheck => {
                let mut s = self.floquet.clone();
                if o.realizations.is_some() {
                    return Err(unsupported("realizations"));
                }
                if o.n_haar.is_some() {
                    return Err(unsupported("n-haar"));
                }
                if let Some(n) = o.n_sites {
                    s.n_sites = n;
                }
                if let Some(h) = o.disorder {
                    s.disorder = h;
                }
                if let Some(a) = o.anisotropy {
                    s.anisotropy = a;
                }
                Params::FloquetCheck(s)
            }
            Experiment::SamplingStudy => {
                let mut s = self.sampling.clone();
                for (flag, set) in [("disorder", o.disorder.is_some()), ("realizations", o.realizations.is_some()), ("n-haar", o.n_haar.is_some())] {
                    if set {
                        return Err(unsupported(flag));
                    }
                }
                if let Some(n) = o.n_sites {
                    s.study.sizes = vec![n];
                }
                if let Some(a) = o.anisotropy {
                    s.anisotropy = a;
                }
                Params::SamplingStudy(s)
            }
            Experiment::IsingOracle => {
                let mut s = self.ising.clone();
                for (flag, set) in [("anisotropy", o.anisotropy.is_some()), ("n-haar", o.n_haar.is_some())] {
                    if set {
                        return Err(unsupported(flag));
                    }
                }
                if let Some(n) = o.n_sites {
                    s.n_sites = n;
                }
                if let Some(h) = o.disorder {
                    s.disorders = vec![h];
                }
                if let Some(r) = o.realizations {
                    s.realizations = r;
                }
                Params::IsingOracle(s)
            }
        };
        let output_dir = o
            .output_dir
            .clone()
            .or_else(|| self.output_dir.clone())
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        let workers = o.workers.or(self.workers);
        if workers == Some(0) {
            let at = if o.workers.is_some() { "--workers".to_string() } else { source.locate("workers") };
            return Err(CliError::Config(format!("{at}: worker count must be at least 1")));
        }
        let resolved = ResolvedConfig { seed: o.seed.or(self.seed).unwrap_or(DEFAULT_SEED), params, output_dir, workers };
        resolved.validate(source)?;
        Ok(resolved)
    }
}

fn check(cond: bool, source: &Source, key: &str, message: impl fmt::Display) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(format!("{}: {message}", source.locate(key))))
    }
}

fn core_check(result: scramble_core::Result<()>, source: &Source, key: &str) -> Result<(), CliError> {
    result.map_err(|e| CliError::Config(format!("{}: {e}", source.locate(key))))
}

fn validate_ensemble(e: &EnsembleSection, section: &str, source: &Source) -> Result<(), CliError> {
    let key = |k: &str| format!("{section}.ensemble.{k}");
    core_check(e.nearest_neighbor().validate(), source, &key("n_sites"))?;
    core_check(e.power_law().validate(), source, &key("exponent"))?;
    check(e.disorder >= 0.0 && e.disorder.is_finite(), source, &key("disorder"), "disorder strength must be non-negative")?;
    check(e.realizations >= 1, source, &key("realizations"), "at least one realization is required")?;
    core_check(e.otoc.validate(e.n_sites), source, &key("otoc"))
}

impl ResolvedConfig {
    /// Schema-level and physics sanity checks, without running anything.
    pub fn validate(&self, source: &Source) -> Result<(), CliError> {
        match &self.params {
            Params::Lightcone(s) => {
                validate_ensemble(&s.ensemble, "lightcone", source)?;
                check(!s.thresholds.is_empty(), source, "lightcone.thresholds", "at least one threshold is required")?;
                check(
                    s.thresholds.iter().all(|&t| t > 0.0 && t <= 4.0),
                    source,
                    "lightcone.thresholds",
                    "thresholds must lie in (0, 4]",
                )?;
                check(s.r_min >= 1, source, "lightcone.r_min", "r_min must be at least 1")
            }
            Params::Distributions(s) => {
                validate_ensemble(&s.ensemble, "distributions", source)?;
                check(
                    s.ensemble.otoc.sites_for(s.ensemble.n_sites).iter().any(|&j| j as i64 - s.ensemble.otoc.probe as i64 == s.distance),
                    source,
                    "distributions.distance",
                    format!("distance {} is not among the measured sites", s.distance),
                )?;
                check_pdf(&s.pdf, "distributions.pdf", source)
            }
            Params::SlowFraction(s) => {
                validate_ensemble(&s.ensemble, "slow_fraction", source)?;
                check(
                    s.ensemble.otoc.sites_for(s.ensemble.n_sites).iter().any(|&j| j as i64 - s.ensemble.otoc.probe as i64 == s.distance),
                    source,
                    "slow_fraction.distance",
                    format!("distance {} is not among the measured sites", s.distance),
                )?;
                check(s.time > 0.0, source, "slow_fraction.time", "probe time must be positive")?;
                check(s.cutoff_exponent > 0.0, source, "slow_fraction.cutoff_exponent", "cutoff exponent must be positive")?;
                check_pdf(&s.pdf, "slow_fraction.pdf", source)
            }
            Params::FloquetCheck(s) => {
                core_check(s.chain().validate(), source, "floquet.n_sites")?;
                check(s.disorder >= 0.0 && s.disorder.is_finite(), source, "floquet.disorder", "disorder strength must be non-negative")?;
                check(!s.sequences.is_empty(), source, "floquet.sequences", "at least one sequence is required")?;
                for kind in &s.sequences {
                    core_check(kind.build(s.anisotropy, s.cycle_time).map(|_| ()), source, "floquet.anisotropy")?;
                }
                check(s.cycles >= 1, source, "floquet.cycles", "at least one cycle is required")?;
                check(s.scale > 0.0 && s.scale.is_finite(), source, "floquet.scale", "scale must be positive")?;
                check(s.n_sites <= 16, source, "floquet.n_sites", "driven evolution is limited to 16 sites (full basis)")?;
                let sites = s.sites();
                check(s.probe < s.n_sites, source, "floquet.probe", "probe site out of range")?;
                check(
                    !sites.is_empty() && sites.iter().all(|&j| j < s.n_sites && j != s.probe),
                    source,
                    "floquet.sites",
                    "measured sites must be in range and differ from the probe",
                )
            }
            Params::SamplingStudy(s) => {
                let st = &s.study;
                check(!st.sizes.is_empty(), source, "sampling.study.sizes", "at least one size is required")?;
                for &n in &st.sizes {
                    core_check(s.template().with_sites(n).map(|_| ()), source, "sampling.study.sizes")?;
                    check(st.probe < n, source, "sampling.study.probe", format!("probe site out of range for N = {n}"))?;
                }
                check(st.pool_size >= 2, source, "sampling.study.pool_size", "pool_size must be at least 2")?;
                check(
                    st.sample_counts.iter().all(|&c| c >= 1 && c <= st.pool_size),
                    source,
                    "sampling.study.sample_counts",
                    "sample counts must lie in [1, pool_size]",
                )?;
                check(!st.kinds.is_empty(), source, "sampling.study.kinds", "at least one state kind is required")?;
                core_check(st.grid.validate(), source, "sampling.study.grid")
            }
            Params::IsingOracle(s) => {
                check(!s.exponents.is_empty(), source, "ising.exponents", "at least one exponent is required")?;
                for &a in &s.exponents {
                    let spec = ChainSpec::new(s.n_sites, Interaction::PowerLaw { exponent: a }, s.coupling, 0.0);
                    core_check(spec.map(|_| ()), source, "ising.exponents")?;
                }
                check(s.n_sites <= 14, source, "ising.n_sites", "the exact trace is limited to 14 sites")?;
                check(
                    !s.disorders.is_empty() && s.disorders.iter().all(|&h| h >= 0.0 && h.is_finite()),
                    source,
                    "ising.disorders",
                    "disorder strengths must be non-negative",
                )?;
                check(s.realizations >= 1, source, "ising.realizations", "at least one realization is required")?;
                check(s.probe + 1 < s.n_sites, source, "ising.probe", "no sites right of the probe")?;
                core_check(s.grid.validate(), source, "ising.grid")
            }
        }
    }
}

fn check_pdf(p: &PdfOptions, key: &str, source: &Source) -> Result<(), CliError> {
    check(
        p.bins >= 1 && p.kde_points >= 2 && p.upper > p.lower,
        source,
        key,
        "density options need bins >= 1, kde_points >= 2 and upper > lower",
    )
}
