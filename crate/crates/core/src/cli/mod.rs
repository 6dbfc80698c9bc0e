//! `qcat` command-line driver.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Format, Range, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerical(#[from] crate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(e) if e.is_input_error() => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Symmetric-well level pairs against xi1
    Pairing,
    /// Double-well gap over (xi1, beta) and its max-gap locus
    Isogap,
    /// Delta01 and Delta02 over a (Gamma, kappa) raster
    Landscape,
    /// Max-min gap saddle per j
    Saddle,
    /// kappa_c, gap and t* scaling fits over a j list
    Scaling,
    /// Optimal annealing schedule and cumulative t*
    Path,
    /// LMG gaps over (Gamma_x, Gamma_z) and their minima
    Lmg,
    /// Small-kappa formulas against exact values; Rayleigh scan
    Asymptotics,
    /// Mean-spin length, angle and spread of the ground state
    Spinstats,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Pairing => "pairing",
            Command::Isogap => "isogap",
            Command::Landscape => "landscape",
            Command::Saddle => "saddle",
            Command::Scaling => "scaling",
            Command::Path => "path",
            Command::Lmg => "lmg",
            Command::Asymptotics => "asymptotics",
            Command::Spinstats => "spinstats",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qcat",
    version,
    about = "Gap analysis and schedule search for catalysed collective-spin annealing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// key=value file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Spin j, or a comma-separated increasing list
    #[arg(long, global = true)]
    j: Option<String>,
    #[arg(long, global = true)]
    p: Option<String>,
    /// start:end:count
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma_range: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa_range: Option<String>,
    /// Gamma_z grid for the LMG scan
    #[arg(long, global = true, allow_hyphen_values = true)]
    gz_range: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    xi_range: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta_range: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha_range: Option<String>,
    /// Sweet-spot parameter for the asymptotic tables
    #[arg(long, global = true, allow_hyphen_values = true)]
    x: Option<String>,
    /// Points per axis of the schedule raster
    #[arg(long, global = true)]
    raster: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Edge weighting: destination, source or average
    #[arg(long, global = true)]
    convention: Option<String>,
    /// Restrict schedules to kappa = 1
    #[arg(long, global = true)]
    forced: bool,
    /// scaling: kappa, catalysed, uncatalysed, lmg, tstar or all
    #[arg(long, global = true)]
    law: Option<String>,
    /// Skip the raster-doubling check in t* scans
    #[arg(long, global = true)]
    no_resolution_check: bool,
}

impl Cli {
    fn flag_entries(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let pairs = [
            ("j", &self.j),
            ("p", &self.p),
            ("gamma-range", &self.gamma_range),
            ("kappa-range", &self.kappa_range),
            ("gz-range", &self.gz_range),
            ("xi-range", &self.xi_range),
            ("beta-range", &self.beta_range),
            ("alpha-range", &self.alpha_range),
            ("x", &self.x),
            ("raster", &self.raster),
            ("out", &self.out),
            ("format", &self.format),
            ("threads", &self.threads),
            ("convention", &self.convention),
            ("law", &self.law),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        }
        if self.forced {
            m.insert("forced".into(), "true".into());
        }
        if self.no_resolution_check {
            m.insert("resolution-check".into(), "false".into());
        }
        m
    }
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut entries = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            config::parse_file(&text)?
        }
        None => BTreeMap::new(),
    };
    entries.extend(cli.flag_entries());
    RunConfig::from_entries(cli.command.name(), entries)
}

fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let tables = commands::run(cfg)?;
    // the output path is part of the run, not of the data
    let mut echo = cfg.entries.clone();
    echo.remove("out");
    match &cfg.out {
        Some(path) => {
            let io = |e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io)?);
            output::write(&mut w, cfg.format, &echo, &tables).map_err(io)?;
            w.flush().map_err(io)
        }
        None => {
            let mut w = std::io::stdout().lock();
            output::write(&mut w, cfg.format, &echo, &tables).map_err(|e| CliError::Io {
                path: "stdout".into(),
                source: e,
            })
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = load(&cli).and_then(|cfg| match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(|| execute(&cfg)),
        None => execute(&cfg),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qcat: {e}");
            e.exit_code()
        }
    }
}
