//! `blochlab`: runs one experiment from a TOML config and writes `report.csv`
//! plus an optional `plot.svg` into the output directory.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numeric flags under `--strict`,
//! 1 any other failure.

mod config;
mod experiments;
mod plot;
mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, ValueEnum};

use config::{load, resolve};
use report::{write_outputs, Report};

/// Bad configuration or input; maps to exit code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

/// Numeric flags raised under `--strict`; maps to exit code 3.
#[derive(Debug)]
struct NotConverged(Vec<String>);

impl fmt::Display for NotConverged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "numeric flags raised: {}", self.0.join("; "))
    }
}

impl std::error::Error for NotConverged {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Entropy,
    Content,
    Sparseness,
    Norms,
    LpCheck,
    Cutoff,
    SaRun,
    Capacity,
    Char1,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Entropy => "entropy",
            Experiment::Content => "content",
            Experiment::Sparseness => "sparseness",
            Experiment::Norms => "norms",
            Experiment::LpCheck => "lp-check",
            Experiment::Cutoff => "cutoff",
            Experiment::SaRun => "sa-run",
            Experiment::Capacity => "capacity",
            Experiment::Char1 => "char1",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "blochlab", version, about = "Desk-scale experiments on weighted Bloch spaces and boundary sets")]
struct Cli {
    experiment: Experiment,
    /// TOML config; relative paths inside it resolve against its directory.
    #[arg(long)]
    config: PathBuf,
    /// Fail with exit code 3 when the experiment raises numeric flags.
    #[arg(long)]
    strict: bool,
    /// Output directory, overriding `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("BLOCHLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Invalid(format!("BLOCHLAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn dispatch(exp: Experiment, path: &Path) -> Result<(Report, config::Common, PathBuf)> {
    macro_rules! run {
        ($f:expr) => {{
            let cfg = load(path, exp.name())?;
            let rep = $f(&cfg.params, &cfg.base, cfg.common.seed)?;
            (rep, cfg.common, cfg.base)
        }};
    }
    Ok(match exp {
        Experiment::Entropy => run!(|p, b: &Path, _| experiments::entropy(p, b)),
        Experiment::Content => run!(|p, b: &Path, _| experiments::content(p, b)),
        Experiment::Sparseness => run!(|p, b: &Path, s| experiments::sparseness(p, b, s)),
        Experiment::Norms => run!(|p, b: &Path, _| experiments::norms(p, b)),
        Experiment::LpCheck => run!(|p, _: &Path, s| experiments::lp_check(p, s)),
        Experiment::Cutoff => run!(|p, b: &Path, _| experiments::cutoff(p, b)),
        Experiment::SaRun => run!(|p, b: &Path, _| experiments::sa_run(p, b)),
        Experiment::Capacity => run!(|p, _: &Path, _| experiments::capacity(p)),
        Experiment::Char1 => run!(|p, b: &Path, _| experiments::char1(p, b)),
    })
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    init_threads()?;
    let (report, common, base) = dispatch(cli.experiment, &cli.config)?;
    let dir = match (&cli.out, &common.out) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => resolve(&base, d),
        (None, None) => base.join(format!("out-{}", cli.experiment.name())),
    };
    if !report.flags.is_empty() {
        if cli.strict {
            return Err(NotConverged(report.flags).into());
        }
        for f in &report.flags {
            eprintln!("warning: {f}");
        }
    }
    write_outputs(&dir, &report, common.plot)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Invalid>().is_some() {
                ExitCode::from(2)
            } else if e.downcast_ref::<NotConverged>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
