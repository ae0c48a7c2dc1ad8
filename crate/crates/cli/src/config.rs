use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Defaults shared by every command. Flags override the config file,
/// which overrides these.
pub struct Defaults {
    pub tol: f64,
    pub spectral_tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub num: usize,
    pub degree: usize,
    pub solver_tol: f64,
    pub multiplicity_window: f64,
}

pub const DEFAULTS: Defaults = Defaults {
    tol: 1e-8,
    spectral_tol: 0.02,
    seed: 42,
    samples: 100,
    num: 10,
    degree: 0,
    solver_tol: 1e-8,
    multiplicity_window: 0.05,
};

/// Optional JSON config file; every key may be omitted.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub spectral_tol: Option<f64>,
    pub solver_tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub max_dim: Option<usize>,
    pub n: Option<usize>,
    pub mesh: Option<String>,
    pub degree: Option<usize>,
    pub num: Option<usize>,
    pub csv_out: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved and validated settings, echoed into the report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_tol: Option<f64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub eqtric: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inject_sign_flip: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &str, tol: f64, seed: u64) -> Self {
        RunConfig {
            command: command.to_string(),
            n: None,
            max_dim: None,
            exact: None,
            mesh: None,
            degree: None,
            num: None,
            samples: None,
            tol,
            spectral_tol: None,
            solver_tol: None,
            seed,
            eqtric: false,
            inject_sign_flip: false,
            csv_out: None,
            out: None,
        }
    }
}

pub fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "{name} must be a positive number, got {v}"
        )))
    }
}

/// Where a mesh comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSpec {
    Icosphere(usize),
    Torus(usize),
    File(PathBuf),
}

impl MeshSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let level = |kind: &str, v: &str| {
            v.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad {kind} parameter '{v}' in mesh spec")))
        };
        match s.split_once(':') {
            Some(("icosphere", v)) => Ok(MeshSpec::Icosphere(level("icosphere", v)?)),
            Some(("torus", v)) => Ok(MeshSpec::Torus(level("torus", v)?)),
            _ if s.is_empty() => Err(CliError::Usage("empty mesh spec".into())),
            _ => Ok(MeshSpec::File(PathBuf::from(s))),
        }
    }
}
