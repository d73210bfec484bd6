//! Optional TOML configuration. Each subcommand reads its own table:
//!
//! ```toml
//! [sweep-theta]
//! eta = 0.9
//! zeta = 0.8
//! steps = 361
//! out = "theta.csv"
//!
//! [sweep-damping]
//! steps = 201
//!
//! [verify]
//! suite = "chain"
//! trials = 1000
//! seed = 7
//! ```
//!
//! Command-line flags override file values, which override built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
    pub eta: Option<f64>,
    pub zeta: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub suite: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    #[serde(default)]
    pub sweep_theta: SweepSection,
    #[serde(default)]
    pub sweep_damping: SweepSection,
    #[serde(default)]
    pub verify: VerifySection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }
}
