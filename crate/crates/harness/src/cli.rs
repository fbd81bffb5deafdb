//! `qngd run | stats | spectrum`.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use qngd_core::models::TfiSetup;
use qngd_core::{Estimator, MetricMode};

use crate::experiment::{run_experiment, ExperimentSpec, GridEntry, ModelSpec, SchemeSpec};
use crate::io::{read_result, write_cdf, write_result, write_summary, write_trace};
use crate::stats::summarize;
use crate::HarnessError;

#[derive(Debug, Parser)]
#[command(
    name = "qngd",
    version,
    about = "Adaptive quantum natural gradient experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a grid of schemes over paired random starting points.
    Run(RunArgs),
    /// Summarise a result file as per-scheme EoT tables.
    Stats(StatsArgs),
    /// Print the exact eigenvalues of a model Hamiltonian.
    Spectrum(ModelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    H2,
    Tfi,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetupArg {
    Minimal,
    Overparam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Qngd,
    Adaptqngd,
    Adaptsgd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Full,
    Block,
    Identity,
}

impl From<MetricArg> for MetricMode {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Full => MetricMode::Full,
            MetricArg::Block => MetricMode::BlockDiagonal,
            MetricArg::Identity => MetricMode::Identity,
        }
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Chain length for `--model tfi`, 2 to 12.
    #[arg(long)]
    pub tfi_n: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub tfi_t: f64,
    #[arg(long, value_enum, default_value_t = SetupArg::Minimal)]
    pub tfi_setup: SetupArg,
    /// Term file for `--model file`.
    #[arg(long)]
    pub pauli_file: Option<PathBuf>,
    /// Rotation layers of the ansatz for `--model file`.
    #[arg(long, default_value_t = 6)]
    pub layers: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated schemes. `qngd` expands to one entry per `--step`.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "adaptqngd")]
    pub scheme: Vec<SchemeArg>,
    /// Comma-separated fixed step sizes for `qngd`.
    #[arg(long, value_delimiter = ',')]
    pub step: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Initial Armijo step; 0.5 for h2 and 1 otherwise when omitted.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 6)]
    pub km: u32,
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Block)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 25)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    #[arg(long, default_value_t = 200)]
    pub max_epochs: usize,
    /// Shots per Pauli term; 0 means exact expectations.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    /// Result JSON. Printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for one trace CSV per (scheme, seed).
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Summary CSV. Printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CDF points CSV.
    #[arg(long)]
    pub cdf: Option<PathBuf>,
}

/// Parses `args` (program name first) and executes. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return report_clap(e, out, err),
    };
    let outcome = match cli.command {
        Command::Run(a) => match run_spec(&a) {
            Ok(spec) => execute_run(&spec, &a, out),
            Err(e) => return report_clap(e, out, err),
        },
        Command::Stats(a) => execute_stats(&a, out),
        Command::Spectrum(a) => match model_spec(&a) {
            Ok(model) => execute_spectrum(&model, out),
            Err(e) => return report_clap(e, out, err),
        },
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn report_clap(e: clap::Error, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let text = e.render().ansi().to_string();
    let _ = if e.use_stderr() {
        write!(err, "{text}")
    } else {
        write!(out, "{text}")
    };
    e.exit_code()
}

fn usage_error(kind: ErrorKind, message: impl std::fmt::Display) -> clap::Error {
    let mut cmd = Cli::command();
    cmd.build();
    cmd.error(kind, message)
}

fn model_spec(a: &ModelArgs) -> Result<ModelSpec, clap::Error> {
    Ok(match a.model {
        ModelKind::H2 => ModelSpec::H2,
        ModelKind::Tfi => ModelSpec::Tfi {
            n: a.tfi_n.ok_or_else(|| {
                usage_error(
                    ErrorKind::MissingRequiredArgument,
                    "--model tfi requires --tfi-n",
                )
            })?,
            t: a.tfi_t,
            setup: match a.tfi_setup {
                SetupArg::Minimal => TfiSetup::Minimal,
                SetupArg::Overparam => TfiSetup::Overparam,
            },
        },
        ModelKind::File => ModelSpec::PauliFile {
            path: a.pauli_file.clone().ok_or_else(|| {
                usage_error(
                    ErrorKind::MissingRequiredArgument,
                    "--model file requires --pauli-file",
                )
            })?,
            layers: a.layers,
        },
    })
}

fn run_spec(a: &RunArgs) -> Result<ExperimentSpec, clap::Error> {
    let model = model_spec(&a.model)?;
    let mut grid: Vec<GridEntry> = Vec::new();
    for s in &a.scheme {
        match s {
            SchemeArg::Qngd => {
                if a.step.is_empty() {
                    return Err(usage_error(
                        ErrorKind::MissingRequiredArgument,
                        "--scheme qngd requires --step",
                    ));
                }
                grid.extend(
                    a.step
                        .iter()
                        .map(|&step| GridEntry::from(SchemeSpec::Qngd { step })),
                );
            }
            SchemeArg::Adaptqngd => grid.push(SchemeSpec::AdaptQngd.into()),
            SchemeArg::Adaptsgd => grid.push(SchemeSpec::AdaptSgd.into()),
        }
    }
    let mut spec = ExperimentSpec::new(model, grid, a.seeds);
    spec.seed_base = a.seed_base;
    spec.alpha = a.alpha;
    spec.beta = a.beta.unwrap_or(spec.beta);
    spec.k_max = a.km;
    spec.tol = a.tol;
    spec.epsilon = a.eps;
    spec.max_epochs = a.max_epochs;
    spec.metric = a.metric.into();
    spec.keep_traces = a.trace_dir.is_some();
    if a.shots > 0 {
        spec.estimator = Estimator::Shots {
            shots: a.shots,
            seed: a.seed_base,
        };
    }
    spec.validate()
        .map_err(|e| usage_error(ErrorKind::InvalidValue, e))?;
    Ok(spec)
}

fn execute_run(
    spec: &ExperimentSpec,
    a: &RunArgs,
    out: &mut impl Write,
) -> Result<(), HarnessError> {
    let mut result = run_experiment(spec)?;
    if let Some(dir) = &a.trace_dir {
        fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
            path: dir.clone(),
            source,
        })?;
        for r in &result.records {
            if let Some(trace) = &r.trace {
                let path = dir.join(format!("{}_seed{}.csv", r.scheme, r.seed));
                let file =
                    File::create(&path).map_err(|source| HarnessError::Io { path, source })?;
                write_trace(file, trace)?;
            }
        }
        for r in &mut result.records {
            r.trace = None;
        }
        result.spec.keep_traces = false;
    }
    match &a.out {
        Some(path) => {
            write_result(path, &result)?;
            write_summary(&mut *out, &summarize(&result)?)
        }
        None => {
            serde_json::to_writer_pretty(&mut *out, &result)?;
            writeln!(out).map_err(HarnessError::Write)
        }
    }
}

fn execute_stats(a: &StatsArgs, out: &mut impl Write) -> Result<(), HarnessError> {
    let result = read_result(&a.input)?;
    let summary = summarize(&result)?;
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            write_summary(file, &summary)?;
        }
        None => write_summary(&mut *out, &summary)?,
    }
    if let Some(path) = &a.cdf {
        let file = File::create(path).map_err(|source| HarnessError::Io {
            path: path.clone(),
            source,
        })?;
        write_cdf(file, &summary)?;
    }
    Ok(())
}

fn execute_spectrum(model: &ModelSpec, out: &mut impl Write) -> Result<(), HarnessError> {
    let (h, _) = model.build()?;
    for e in h.spectrum()? {
        writeln!(out, "{e}").map_err(HarnessError::Write)?;
    }
    Ok(())
}
