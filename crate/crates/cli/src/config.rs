//! Shared flags and the optional config file they override.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

#[derive(Args, Debug, Default)]
pub struct Common {
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    #[arg(long, global = true)]
    pub rounds: Option<usize>,
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Verdict the run must produce for status 0.
    #[arg(long, global = true)]
    pub expect: Option<String>,
    /// JSON file with defaults for the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Effective settings, echoed into every report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub max_size: Option<usize>,
    pub rounds: Option<usize>,
    pub nodes: Option<usize>,
    pub budget: Option<u64>,
    pub out: Option<PathBuf>,
    pub expect: Option<String>,
}

impl ExperimentConfig {
    /// Config file values, then flags on top.
    pub fn load(common: &Common) -> Result<Self> {
        let mut cfg = match &common.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => {$(
                if let Some(v) = &common.$f {
                    cfg.$f = Some(v.clone());
                }
            )*};
        }
        over!(seed, samples, max_size, rounds, nodes, out, expect);
        Ok(cfg)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}
