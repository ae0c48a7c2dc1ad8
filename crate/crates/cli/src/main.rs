mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::{positive, FileConfig, MeshSpec, RunConfig, DEFAULTS};
use dirac_lab::report::Status;

const EXIT_CHECK: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Check(_) => EXIT_CHECK,
        }
    }
}

/// Verification suites for the Clifford-bundle operator calculus and
/// discrete Hodge spectra of closed surfaces.
#[derive(Parser)]
#[command(name = "dirac-lab", version)]
struct Cli {
    /// Optional JSON file with default settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive fiber identities and curvature-operator formulas.
    VerifyFiber(VerifyFiberArgs),
    /// Twistor-family residuals and identities on the round sphere Sⁿ.
    Twistor(TwistorArgs),
    /// Hodge–Laplace spectrum of a triangulated closed surface.
    MeshSpectrum(MeshSpectrumArgs),
}

#[derive(Args)]
struct VerifyFiberArgs {
    /// Largest fiber dimension, 2..=8.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Use exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Negates the expected volume-action sign (mutation test).
    #[arg(long, hide = true)]
    inject_sign_flip: bool,
}

#[derive(Args)]
struct TwistorArgs {
    /// Sphere dimension, 2..=11.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Request the ∇_X Dσ = K_X σ check even where it is undefined.
    #[arg(long)]
    eqtric: bool,
}

#[derive(Args)]
struct MeshSpectrumArgs {
    /// `icosphere:k`, `torus:m`, or a path to an OFF file.
    #[arg(long)]
    mesh: Option<String>,
    /// Form degree 0, 1 or 2.
    #[arg(long)]
    degree: Option<usize>,
    /// Number of eigenvalues to compute.
    #[arg(long)]
    num: Option<usize>,
    /// Tolerance for the inequality checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Relative tolerance for reference eigenvalues.
    #[arg(long)]
    spectral_tol: Option<f64>,
    /// Eigenpair residual tolerance of the solver.
    #[arg(long)]
    solver_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the spectrum as CSV.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let out = cli.out.or(file.out.clone());
    let mut cfg = match cli.command {
        Command::VerifyFiber(a) => {
            let max_dim = a
                .max_dim
                .or(file.max_dim)
                .ok_or_else(|| CliError::Usage("--max-dim is required".into()))?;
            if !(2..=8).contains(&max_dim) {
                return Err(CliError::Usage(format!(
                    "--max-dim {max_dim} outside 2..=8"
                )));
            }
            let mut cfg = RunConfig::new(
                "verify-fiber",
                positive("tol", a.tol.or(file.tol).unwrap_or(DEFAULTS.tol))?,
                a.seed.or(file.seed).unwrap_or(DEFAULTS.seed),
            );
            cfg.max_dim = Some(max_dim);
            cfg.exact = Some(a.exact);
            cfg.inject_sign_flip = a.inject_sign_flip;
            cfg
        }
        Command::Twistor(a) => {
            let n =
                a.n.or(file.n)
                    .ok_or_else(|| CliError::Usage("--n is required".into()))?;
            if !(2..=11).contains(&n) {
                return Err(CliError::Usage(format!("--n {n} outside 2..=11")));
            }
            let samples = a.samples.or(file.samples).unwrap_or(DEFAULTS.samples);
            if samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let mut cfg = RunConfig::new(
                "twistor",
                positive("tol", a.tol.or(file.tol).unwrap_or(DEFAULTS.tol))?,
                a.seed.or(file.seed).unwrap_or(DEFAULTS.seed),
            );
            cfg.n = Some(n);
            cfg.samples = Some(samples);
            cfg.eqtric = a.eqtric;
            cfg
        }
        Command::MeshSpectrum(a) => {
            let mesh = a
                .mesh
                .or(file.mesh.clone())
                .ok_or_else(|| CliError::Usage("--mesh is required".into()))?;
            MeshSpec::parse(&mesh)?;
            let degree = a.degree.or(file.degree).unwrap_or(DEFAULTS.degree);
            if degree > 2 {
                return Err(CliError::Usage(format!("--degree {degree} outside 0..=2")));
            }
            let mut cfg = RunConfig::new(
                "mesh-spectrum",
                positive("tol", a.tol.or(file.tol).unwrap_or(DEFAULTS.tol))?,
                a.seed.or(file.seed).unwrap_or(DEFAULTS.seed),
            );
            cfg.mesh = Some(mesh);
            cfg.degree = Some(degree);
            cfg.num = Some(a.num.or(file.num).unwrap_or(DEFAULTS.num));
            cfg.spectral_tol = Some(positive(
                "spectral-tol",
                a.spectral_tol
                    .or(file.spectral_tol)
                    .unwrap_or(DEFAULTS.spectral_tol),
            )?);
            cfg.solver_tol = Some(positive(
                "solver-tol",
                a.solver_tol
                    .or(file.solver_tol)
                    .unwrap_or(DEFAULTS.solver_tol),
            )?);
            cfg.csv_out = a.csv_out.or(file.csv_out.clone());
            cfg
        }
    };
    cfg.out = out;
    Ok(cfg)
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = resolve(cli)?;
    let outcome = match cfg.command.as_str() {
        "verify-fiber" => commands::verify_fiber(&cfg),
        "twistor" => commands::twistor(&cfg)?,
        _ => commands::mesh_spectrum(&cfg)?,
    };
    if let (Some(path), Some(csv)) = (&cfg.csv_out, &outcome.csv) {
        write_file(path, csv)?;
    }
    let json = outcome.report.to_json();
    match &cfg.out {
        Some(path) => write_file(path, &(json + "\n"))?,
        None => println!("{json}"),
    }
    for rec in &outcome.report.records {
        let status = match rec.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        eprintln!("{status:4}  {}", rec.name);
    }
    Ok(if outcome.solver_failed {
        EXIT_SOLVER
    } else if outcome.report.status == Status::Pass {
        0
    } else {
        EXIT_CHECK
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
