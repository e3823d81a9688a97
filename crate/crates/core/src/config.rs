//! Contest configuration: every tunable of the arena economy.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::level::PerLevel;
use crate::verdict::Verdict;
use crate::Credits;

/// Credit surcharge per non-accepted submission, keyed by verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PenaltySchedule {
    #[serde(rename = "WA")]
    pub wa: Credits,
    #[serde(rename = "RE")]
    pub re: Credits,
    #[serde(rename = "CE")]
    pub ce: Credits,
    #[serde(rename = "TLE")]
    pub tle: Credits,
    #[serde(rename = "MLE")]
    pub mle: Credits,
}

impl PenaltySchedule {
    pub const fn uniform(amount: Credits) -> Self {
        PenaltySchedule {
            wa: amount,
            re: amount,
            ce: amount,
            tle: amount,
            mle: amount,
        }
    }

    /// Penalty for `verdict`; `None` for AC, which is never penalized.
    pub fn get(&self, verdict: Verdict) -> Option<Credits> {
        match verdict {
            Verdict::AC => None,
            Verdict::WA => Some(self.wa),
            Verdict::RE => Some(self.re),
            Verdict::CE => Some(self.ce),
            Verdict::TLE => Some(self.tle),
            Verdict::MLE => Some(self.mle),
        }
    }
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        PenaltySchedule::uniform(100)
    }
}

/// Judge knobs that live alongside the economy so a manifest fully
/// describes a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct JudgeSettings {
    /// Keep running hidden cases after the first failure (diagnostics only;
    /// `passed` still reports the passing prefix).
    pub run_all_cases: bool,
    pub max_custom_cases: usize,
    pub output_cap_bytes: usize,
    pub default_time_limit_ms: u64,
    pub default_memory_limit_mib: u64,
}

impl Default for JudgeSettings {
    fn default() -> Self {
        JudgeSettings {
            run_all_cases: false,
            max_custom_cases: 10,
            output_cap_bytes: 16 << 20,
            default_time_limit_ms: 2_000,
            default_memory_limit_mib: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContestConfig {
    pub credit_limit: Credits,
    pub score_weights: PerLevel<u64>,
    /// Indexed by hint level 0..=4.
    pub hint_costs: [Credits; 5],
    /// Flat charge per TEST_CODE request.
    pub test_cost: Credits,
    /// Extra charge per custom case in a TEST_CODE request; 0 keeps pricing flat.
    pub test_cost_per_case: Credits,
    pub penalty_schedule: PenaltySchedule,
    /// Credits per second of wall-clock delivery time.
    pub alpha: f64,
    pub total_problems: usize,
    pub problem_distribution: PerLevel<usize>,
    /// Seconds an agent may take to answer one turn.
    pub agent_turn_timeout: u64,
    pub rng_seed: u64,
    pub judge: JudgeSettings,
}

impl ContestConfig {
    pub const DEFAULT_CREDIT_LIMIT: Credits = 20_000_000;
    pub const DEFAULT_WEIGHTS: PerLevel<u64> = PerLevel::new(1, 2, 5, 10);
    pub const FLAT_WEIGHTS: PerLevel<u64> = PerLevel::new(1, 1, 1, 1);
    pub const EXPONENTIAL_WEIGHTS: PerLevel<u64> = PerLevel::new(1, 10, 100, 1000);

    pub fn hint_cost(&self, level: u8) -> Option<Credits> {
        self.hint_costs.get(usize::from(level)).copied()
    }
}

impl Default for ContestConfig {
    fn default() -> Self {
        ContestConfig {
            credit_limit: Self::DEFAULT_CREDIT_LIMIT,
            score_weights: Self::DEFAULT_WEIGHTS,
            hint_costs: [500, 1_000, 1_000, 1_500, 1_500],
            test_cost: 10,
            test_cost_per_case: 0,
            penalty_schedule: PenaltySchedule::default(),
            alpha: 0.0,
            total_problems: 12,
            problem_distribution: PerLevel::new(3, 3, 3, 3),
            agent_turn_timeout: 300,
            rng_seed: 0,
            judge: JudgeSettings::default(),
        }
    }
}

/// One broken invariant, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigViolation {
    pub field: String,
    pub message: String,
}

impl ConfigViolation {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigViolation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Checks every configuration invariant. An empty list means the config is
/// usable. Credit amounts are unsigned, so negative costs never get this far.
pub fn validate_config(config: &ContestConfig) -> Vec<ConfigViolation> {
    let mut out = Vec::new();

    if !config.alpha.is_finite() || config.alpha < 0.0 {
        out.push(ConfigViolation::new(
            "alpha",
            format!("must be a finite value >= 0, got {}", config.alpha),
        ));
    }
    for (level, weight) in config.score_weights.iter() {
        if weight == 0 {
            out.push(ConfigViolation::new(
                format!("score_weights.{level}"),
                "must be strictly positive",
            ));
        }
    }
    let distributed: usize = config.problem_distribution.iter().map(|(_, n)| n).sum();
    if distributed != config.total_problems {
        out.push(ConfigViolation::new(
            "problem_distribution",
            format!(
                "sums to {distributed} but total_problems is {}",
                config.total_problems
            ),
        ));
    }
    if config.total_problems == 0 {
        out.push(ConfigViolation::new("total_problems", "must be at least 1"));
    }
    if config.agent_turn_timeout == 0 {
        out.push(ConfigViolation::new(
            "agent_turn_timeout",
            "must be at least 1 second",
        ));
    }
    if config.judge.max_custom_cases == 0 {
        out.push(ConfigViolation::new(
            "judge.max_custom_cases",
            "must be at least 1",
        ));
    }
    if config.judge.default_time_limit_ms == 0 {
        out.push(ConfigViolation::new(
            "judge.default_time_limit_ms",
            "must be > 0",
        ));
    }
    if config.judge.default_memory_limit_mib == 0 {
        out.push(ConfigViolation::new(
            "judge.default_memory_limit_mib",
            "must be > 0",
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert_eq!(validate_config(&ContestConfig::default()), vec![]);
    }

    #[test]
    fn negative_alpha_is_flagged() {
        let config = ContestConfig {
            alpha: -1.0,
            ..ContestConfig::default()
        };
        let violations = validate_config(&config);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "alpha");
    }

    #[test]
    fn nan_alpha_is_flagged() {
        let config = ContestConfig {
            alpha: f64::NAN,
            ..ContestConfig::default()
        };
        assert_eq!(validate_config(&config)[0].field, "alpha");
    }

    #[test]
    fn exponential_weights_are_valid() {
        let config = ContestConfig {
            score_weights: ContestConfig::EXPONENTIAL_WEIGHTS,
            ..ContestConfig::default()
        };
        assert!(validate_config(&config).is_empty());
    }

    #[test]
    fn zero_weight_and_bad_distribution_are_each_named() {
        let config = ContestConfig {
            score_weights: PerLevel::new(1, 0, 5, 10),
            problem_distribution: PerLevel::new(3, 3, 3, 2),
            ..ContestConfig::default()
        };
        let fields: Vec<_> = validate_config(&config)
            .into_iter()
            .map(|v| v.field)
            .collect();
        assert_eq!(fields, vec!["score_weights.Silver", "problem_distribution"]);
    }

    #[test]
    fn penalty_schedule_never_prices_accepted() {
        let p = PenaltySchedule::default();
        assert_eq!(p.get(Verdict::AC), None);
        for v in [
            Verdict::WA,
            Verdict::RE,
            Verdict::CE,
            Verdict::TLE,
            Verdict::MLE,
        ] {
            assert_eq!(p.get(v), Some(100));
        }
    }

    #[test]
    fn missing_fields_fall_back_to_defaults() {
        let config: ContestConfig = serde_json::from_str(r#"{"credit_limit": 10000000}"#).unwrap();
        assert_eq!(config.credit_limit, 10_000_000);
        assert_eq!(config.test_cost, 10);
        assert_eq!(config.hint_costs, [500, 1_000, 1_000, 1_500, 1_500]);
    }
}
