//! Config overrides and ablation grids.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use arena_core::{ContestConfig, Credits, PerLevel};
use arena_protocol::Services;
use serde::{Deserialize, Serialize};

use crate::endpoint::AgentSource;
use crate::orchestrator::{run_series, MatchOptions, SeriesResult};
use crate::ArenaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    Flat,
    Default,
    #[serde(alias = "exponential")]
    Exp,
}

impl WeightScheme {
    pub fn weights(self) -> PerLevel<u64> {
        match self {
            WeightScheme::Flat => ContestConfig::FLAT_WEIGHTS,
            WeightScheme::Default => ContestConfig::DEFAULT_WEIGHTS,
            WeightScheme::Exp => ContestConfig::EXPONENTIAL_WEIGHTS,
        }
    }
}

impl FromStr for WeightScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "flat" => Ok(WeightScheme::Flat),
            "default" => Ok(WeightScheme::Default),
            "exp" | "exponential" => Ok(WeightScheme::Exp),
            other => Err(format!(
                "unknown weight scheme `{other}` (flat, default, exp)"
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfigOverrides {
    pub credit_limit: Option<Credits>,
    pub weights: Option<WeightScheme>,
    pub alpha: Option<f64>,
}

impl ConfigOverrides {
    pub fn apply(&self, base: &ContestConfig) -> ContestConfig {
        let mut config = base.clone();
        if let Some(limit) = self.credit_limit {
            config.credit_limit = limit;
        }
        if let Some(w) = self.weights {
            config.score_weights = w.weights();
        }
        if let Some(alpha) = self.alpha {
            config.alpha = alpha;
        }
        config
    }

    /// Services for the overridden configuration, sharing judge and hints.
    pub fn services(&self, base: &Services) -> Result<Services, ArenaError> {
        let contest = base.contest.with_config(self.apply(&base.contest.config))?;
        Ok(base.with_contest(contest))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub label: String,
    #[serde(flatten)]
    pub overrides: ConfigOverrides,
}

/// `arena ablate` input. Paths are relative to the grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AblationGrid {
    pub contest: PathBuf,
    #[serde(default)]
    pub corpus: Option<PathBuf>,
    pub agents_file: PathBuf,
    /// Endpoints, e.g. `scripted:greedy`.
    pub agents: Vec<String>,
    #[serde(default = "one")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    pub configs: Vec<GridConfig>,
}

fn one() -> usize {
    1
}

impl AblationGrid {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArenaError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ArenaError::io(path, e))?;
        let mut grid: AblationGrid =
            serde_json::from_str(&text).map_err(|e| ArenaError::parse(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        grid.contest = base.join(&grid.contest);
        grid.agents_file = base.join(&grid.agents_file);
        grid.corpus = grid.corpus.map(|c| base.join(c));
        Ok(grid)
    }
}

/// One series per grid column, keyed by label.
pub fn run_grid(
    configs: &[GridConfig],
    base: &Services,
    agents: &[AgentSource],
    runs: usize,
    options: &MatchOptions,
) -> Result<Vec<(String, SeriesResult)>, ArenaError> {
    configs
        .iter()
        .map(|c| {
            let services = Arc::new(c.overrides.services(base)?);
            let series = run_series(services, agents, runs, options, |_, _| Ok(()))?;
            Ok((c.label.clone(), series))
        })
        .collect()
}
