//! Command-line front end: config handling, the six commands and CSV output.

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::Report;
use crate::config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numeric(String),
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::NotConverged(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Io(m)
            | CliError::Numeric(m)
            | CliError::NotConverged(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            CliError::Config(_) => "config error",
            CliError::Io(_) => "i/o error",
            CliError::Numeric(_) => "numeric failure",
            CliError::NotConverged(_) => "fit did not converge",
        };
        write!(f, "{kind}: {}", self.message())
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(
    name = "chromobath",
    version,
    about = "Spectral densities and decoherence of chromophores in proteins"
)]
pub struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Seed for the fit multi-start.
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// J(ω) on a frequency grid.
    Spectral(Overrides),
    /// Lorentzian parameters of each environment component.
    Lorentzian(Overrides),
    /// θ, Γ, |ρ12|, ν and C on a time grid.
    Dynamics(Overrides),
    /// Multi-exponential fit of a correlation file.
    Fit(Overrides),
    /// Crossover frequencies and coherence regimes.
    Crossover(Overrides),
    /// Bundled solvation-dynamics fits with derived couplings.
    Datasets(Overrides),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectral(_) => "spectral",
            Command::Lorentzian(_) => "lorentzian",
            Command::Dynamics(_) => "dynamics",
            Command::Fit(_) => "fit",
            Command::Crossover(_) => "crossover",
            Command::Datasets(_) => "datasets",
        }
    }

    fn overrides(&self) -> &[String] {
        match self {
            Command::Spectral(o)
            | Command::Lorentzian(o)
            | Command::Dynamics(o)
            | Command::Fit(o)
            | Command::Crossover(o)
            | Command::Datasets(o) => &o.args,
        }
    }
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Config overrides as `--key value` or `--key=value`.
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        value_name = "--KEY VALUE"
    )]
    pub args: Vec<String>,
}

type Split = (Option<PathBuf>, Option<PathBuf>, Vec<String>);

/// Global flags given after the first override end up among the overrides.
fn split_globals(cli: &Cli) -> Result<Split, CliError> {
    let mut config = cli.config.clone();
    let mut out = cli.out.clone();
    let mut rest = Vec::new();
    let mut it = cli.command.overrides().iter();
    while let Some(arg) = it.next() {
        let (flag, inline) = match arg.split_once('=') {
            Some((f, v)) => (f, Some(v.to_string())),
            None => (arg.as_str(), None),
        };
        let slot = match flag {
            "--config" => &mut config,
            "--out" => &mut out,
            _ => {
                rest.push(arg.clone());
                continue;
            }
        };
        let value = match inline {
            Some(v) => v,
            None => it
                .next()
                .cloned()
                .ok_or_else(|| CliError::Config(format!("{flag} needs a value")))?,
        };
        *slot = Some(PathBuf::from(value));
    }
    Ok((config, out, rest))
}

/// Merges config file, global flags and overrides, in that order.
pub fn resolve_config(cli: &Cli) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let (config_path, out, rest) = split_globals(cli)?;
    let mut cfg = match &config_path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {}", p.display(), e.message())))?
        }
        None => RunConfig::default(),
    };
    if let Some(t) = cli.tol {
        cfg.set("tol", &t.to_string())?;
    }
    if let Some(s) = cli.seed {
        cfg.set("seed", &s.to_string())?;
    }
    cfg.apply_overrides(&rest)?;
    Ok((cfg, out))
}

pub fn execute(command: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    match command {
        "spectral" => commands::spectral(cfg),
        "lorentzian" => commands::lorentzian(cfg),
        "dynamics" => commands::dynamics(cfg),
        "fit" => commands::fit(cfg),
        "crossover" => commands::crossover(cfg),
        "datasets" => commands::datasets(cfg),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}

/// Runs one parsed invocation and writes its table.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (cfg, out) = resolve_config(cli)?;
    let name = cli.command.name();
    let report = execute(name, &cfg)?;
    let mut sink: Box<dyn Write> = match &out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    output::write_table(&mut sink, name, &cfg.hash(), &report.table)?;
    sink.flush().map_err(|e| CliError::Io(e.to_string()))?;
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
