mod config;
mod error;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{Experiment, FileConfig, Overrides, ResolvedConfig, Source};
use error::CliError;
use output::Output;

/// Operator growth in disordered XXZ spin chains.
#[derive(Parser)]
#[command(name = "scramble", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Disorder-averaged OTOC maps and light-cone fits for NN and power-law chains.
    Lightcone(RunArgs),
    /// Distributions of C(r, t) across disorder realizations over time.
    Distributions(RunArgs),
    /// Fraction of realizations slower than the Ising light cone.
    SlowFraction(RunArgs),
    /// Driven echo protocol against the exact effective XXZ evolution.
    FloquetCheck(RunArgs),
    /// SEM of the time-averaged OTOC over initial-state kinds and sample counts.
    SamplingStudy(RunArgs),
    /// Numerical Ising OTOC against its closed form.
    IsingOracle(RunArgs),
    /// Check a config file without running anything.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; every key is optional.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: $SCRAMBLE_OUTPUT_DIR, else ./scramble-output].
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    n_sites: Option<usize>,
    /// Disorder strength h.
    #[arg(long)]
    disorder: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    anisotropy: Option<f64>,
    /// Haar states per realization (switches to the typicality estimator).
    #[arg(long)]
    n_haar: Option<usize>,
    /// Also write a matplotlib script that plots the CSV files.
    #[arg(long)]
    plot_script: bool,
    /// Suppress progress output on stderr.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct ValidateArgs {
    config: PathBuf,
    /// Experiment to check; defaults to the file's `experiment` key, or all.
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            output_dir: self.output_dir.clone(),
            workers: self.workers,
            n_sites: self.n_sites,
            disorder: self.disorder,
            realizations: self.realizations,
            anisotropy: self.anisotropy,
            n_haar: self.n_haar,
        }
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    experiment: Experiment,
    config: &'a ResolvedConfig,
    version: &'static str,
    workers: usize,
    wall_time_seconds: f64,
    files: &'a [String],
}

fn load(path: Option<&PathBuf>) -> Result<(Source, FileConfig), CliError> {
    let source = match path {
        Some(p) => Source::read(p)?,
        None => Source::default(),
    };
    let file = source.parse()?;
    Ok((source, file))
}

fn execute(experiment: Experiment, args: &RunArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (source, file) = load(args.config.as_ref())?;
    let resolved = file.resolve(experiment, &args.overrides(), &source)?;
    if let Some(n) = resolved.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start {n} workers: {e}")))?;
    }
    let hash = resolved.hash();
    let mut out = Output::create(&resolved.output_dir, resolved.seed, &hash)?;
    let ctx = run::Context { seed: resolved.seed, quiet: args.quiet };
    run::run(&resolved.params, &ctx, &mut out)?;
    if args.plot_script {
        let script = plot_script(experiment, resolved.seed, &hash);
        out.text(&format!("plot_{}.py", experiment.section()), &script)?;
    }
    let files = out.files().to_vec();
    let meta = Metadata {
        experiment: resolved.experiment(),
        config: &resolved,
        version: env!("CARGO_PKG_VERSION"),
        workers: rayon::current_num_threads(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        files: &files,
    };
    out.json("metadata.json", &meta)?;
    if !args.quiet {
        eprintln!("wrote {} files to {}", files.len() + 1, out.dir().display());
    }
    Ok(())
}

fn validate(args: &ValidateArgs) -> Result<(), CliError> {
    let (source, file) = load(Some(&args.config))?;
    let experiments = match args.experiment.or(file.experiment) {
        Some(e) => vec![e],
        None => Experiment::ALL.to_vec(),
    };
    for e in experiments {
        file.resolve(e, &Overrides::default(), &source)?;
    }
    println!("ok");
    Ok(())
}

/// Matplotlib script plotting every time-indexed CSV of the directory it
/// sits in on a logarithmic time axis.
fn plot_script(experiment: Experiment, seed: u64, hash: &str) -> String {
    format!(
        r##"# {experiment} plots; seed: {seed}; config_sha256: {hash}
import csv
import pathlib

import matplotlib.pyplot as plt

here = pathlib.Path(__file__).parent
for path in sorted(here.glob("*.csv")):
    with path.open() as f:
        rows = [r for r in csv.reader(line for line in f if not line.startswith("#"))]
    header, data = rows[0], rows[1:]
    if header[0] != "time" or not data:
        continue
    t = [float(r[0]) for r in data]
    fig, ax = plt.subplots()
    for k, name in enumerate(header[1:], start=1):
        ax.plot(t, [float(r[k]) if r[k] else float("nan") for r in data], label=name)
    ax.set_xscale("log" if min(t) > 0 else "linear")
    ax.set_xlabel("Jt")
    ax.set_title(path.stem)
    if len(header) <= 16:
        ax.legend(fontsize="small")
    fig.savefig(path.with_suffix(".png"), dpi=150)
    plt.close(fig)
"##
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lightcone(a) => execute(Experiment::Lightcone, a),
        Command::Distributions(a) => execute(Experiment::Distributions, a),
        Command::SlowFraction(a) => execute(Experiment::SlowFraction, a),
        Command::FloquetCheck(a) => execute(Experiment::FloquetCheck, a),
        Command::SamplingStudy(a) => execute(Experiment::SamplingStudy, a),
        Command::IsingOracle(a) => execute(Experiment::IsingOracle, a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
