//! Optional JSON config file. Every field is a fallback for the matching
//! command-line flag; flags always win. Environment variables are never
//! consulted.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub paths: Option<usize>,
    pub process: Option<String>,
    pub grid: Option<String>,
    pub kernel: Option<String>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub sigma2: Option<f64>,
    pub n_max: Option<usize>,
    pub m: Option<usize>,
    pub data: Option<String>,
    pub out: Option<String>,
    pub emit_gram: Option<String>,
    pub rates_out: Option<String>,
    pub diagnostics: Option<String>,
    pub svg: Option<String>,
    pub suite: Option<String>,
    pub beta_grid: Option<String>,
    pub lambda_grid: Option<String>,
    pub sigma2_grid: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("invalid config {}", p.display()))
            }
        }
    }
}

/// Parses a `lo,hi,n` log-spaced grid spec.
pub fn parse_grid_spec(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        anyhow::bail!("search grid spec must be lo,hi,n, got `{spec}`");
    }
    let lo: f64 = parts[0].trim().parse().context("bad lower bound")?;
    let hi: f64 = parts[1].trim().parse().context("bad upper bound")?;
    let n: usize = parts[2].trim().parse().context("bad point count")?;
    if lo <= 0.0 || hi < lo || n == 0 {
        anyhow::bail!("search grid needs 0 < lo <= hi and n >= 1, got `{spec}`");
    }
    Ok(sskern_core::log_space(lo, hi, n))
}
