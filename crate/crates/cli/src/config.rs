//! Optional TOML configuration.

use serde::Deserialize;
use std::path::Path;

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Node budget for lattice enumeration.
    pub enumeration_budget: u64,
    /// Default profile horizon.
    pub t_max: f64,
    /// Default profile step.
    pub step: f64,
    /// Difference-quotient tolerance for profile checks.
    pub slope_tolerance: f64,
    /// Gap threshold defining separated stretches in profile checks.
    pub separation: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            enumeration_budget: pgn_core::lattice::DEFAULT_BUDGET,
            t_max: 30.0,
            step: 0.125,
            slope_tolerance: 1e-6,
            separation: 1.0,
        }
    }
}

pub fn load(path: Option<&Path>) -> anyhow::Result<Config> {
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", p.display()))?;
            Ok(toml::from_str(&text)?)
        }
    }
}
