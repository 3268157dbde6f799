//! `biharm`: spectra, radial and separable biharmonic constructions,
//! verification sweeps and punctured-space family fits.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Config, Format, Overrides};

#[derive(Parser, Debug)]
#[command(name = "biharm", version, about = "Biharmonic functions on model spaces")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// `key = value` file (keys: format, seed, tau, quad_tol, sample_count).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: table, json or csv.
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Verification threshold.
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Quadrature tolerance (absolute and relative).
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Laplace, bi-Laplace, buckling and k-Laplace spectra of S^m.
    Spectrum(commands::SpectrumArgs),
    /// Numeric radial biharmonic basis on a model space.
    RadialBasis(commands::RadialBasisArgs),
    /// Separable biharmonic function u(r) v_k on a model space.
    Separable(commands::SeparableArgs),
    /// Classify a field, or run the regression catalog.
    Verify(commands::VerifyArgs),
    /// Fit samples on a punctured space to the positive-Laplacian family.
    Classify(commands::ClassifyArgs),
}

/// Exit status 1: a check ran and failed. Exit status 2: bad usage or a
/// construction error.
#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Usage(String),
}

impl From<biharm::Error> for Failure {
    fn from(e: biharm::Error) -> Self {
        match e {
            biharm::Error::QuadratureFailure { .. } | biharm::Error::IntegrationBlowUp { .. } => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let overrides = Overrides {
        format: g.format,
        seed: g.seed,
        tau: g.tau,
        quad_tol: g.quad_tol,
        sample_count: None,
    };
    let cfg = match Config::load(&overrides, g.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a, &cfg),
        Command::RadialBasis(a) => commands::radial_basis(&a, &cfg),
        Command::Separable(a) => commands::separable(&a, &cfg),
        Command::Verify(a) => commands::verify(&a, &cfg),
        Command::Classify(a) => commands::classify(&a, &cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
