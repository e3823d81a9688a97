//! The unified credit economy.
//!
//! Every participant owns one append-only [`CreditLedger`]. Entries fall in
//! five categories; two different totals are read from them:
//!
//! - the *termination total* (action costs + time cost) decides when a
//!   participant runs out of budget;
//! - the *consumed total* adds penalties and breaks score ties.
//!
//! Action costs are inference, hints and tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ContestConfig;
use crate::verdict::Verdict;
use crate::Credits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("unknown model id `{0}`")]
    UnknownModel(String),
    #[error("hint level {0} is out of range 0..=4")]
    HintLevelOutOfRange(u8),
    #[error("accepted submissions are never penalized")]
    PenaltyOnAccepted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Inference,
    Hint,
    Test,
    Time,
    Penalty,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Inference,
        Category::Hint,
        Category::Test,
        Category::Time,
        Category::Penalty,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

/// Where in the session an entry was written.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stamp {
    pub turn: u64,
    /// Milliseconds since the participant's session started.
    pub t_ms: u64,
}

impl Stamp {
    pub fn new(turn: u64, t_ms: u64) -> Self {
        Stamp { turn, t_ms }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub category: Category,
    pub amount: Credits,
    pub turn: u64,
    pub t_ms: u64,
}

/// Append-only credit log with per-category running sums.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CreditLedger {
    entries: Vec<LedgerEntry>,
    #[serde(skip)]
    sums: [Credits; 5],
}

impl<'de> Deserialize<'de> for CreditLedger {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            entries: Vec<LedgerEntry>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(CreditLedger::from_entries(raw.entries))
    }
}

impl CreditLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a ledger (and its sums) from logged entries.
    pub fn from_entries(entries: impl IntoIterator<Item = LedgerEntry>) -> Self {
        let mut ledger = CreditLedger::new();
        for e in entries {
            ledger.push(e.category, e.amount, Stamp::new(e.turn, e.t_ms));
        }
        ledger
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries written after the first `from` entries.
    pub fn entries_since(&self, from: usize) -> &[LedgerEntry] {
        &self.entries[from.min(self.entries.len())..]
    }

    fn push(&mut self, category: Category, amount: Credits, at: Stamp) -> Credits {
        self.entries.push(LedgerEntry {
            category,
            amount,
            turn: at.turn,
            t_ms: at.t_ms,
        });
        self.sums[category.slot()] += amount;
        amount
    }

    /// Charges generated and consumed tokens at the model's price.
    pub fn charge_inference(&mut self, usage: TokenUsage, price: ModelPrice, at: Stamp) -> Credits {
        let amount = price.cost(usage.input_tokens, usage.output_tokens);
        self.push(Category::Inference, amount, at)
    }

    pub fn charge_hint(
        &mut self,
        level: u8,
        config: &ContestConfig,
        at: Stamp,
    ) -> Result<Credits, LedgerError> {
        let cost = config
            .hint_cost(level)
            .ok_or(LedgerError::HintLevelOutOfRange(level))?;
        Ok(self.push(Category::Hint, cost, at))
    }

    /// One TEST_CODE request. Flat `test_cost`, plus the optional per-case
    /// extension.
    pub fn charge_test(&mut self, cases: usize, config: &ContestConfig, at: Stamp) -> Credits {
        let amount = config.test_cost + config.test_cost_per_case * cases as Credits;
        self.push(Category::Test, amount, at)
    }

    /// Brings the Time category up to `round(alpha * elapsed)`. Only the
    /// difference is appended, so re-accruing the same elapsed time is a no-op.
    pub fn accrue_time(&mut self, elapsed_secs: f64, config: &ContestConfig, at: Stamp) -> Credits {
        let target = round_half_up(config.alpha * elapsed_secs.max(0.0));
        let current = self.category_total(Category::Time);
        if target <= current {
            return 0;
        }
        self.push(Category::Time, target - current, at)
    }

    pub fn add_penalty(
        &mut self,
        verdict: Verdict,
        config: &ContestConfig,
        at: Stamp,
    ) -> Result<Credits, LedgerError> {
        let amount = config
            .penalty_schedule
            .get(verdict)
            .ok_or(LedgerError::PenaltyOnAccepted)?;
        Ok(self.push(Category::Penalty, amount, at))
    }

    pub fn category_total(&self, category: Category) -> Credits {
        self.sums[category.slot()]
    }

    /// C_action: inference + hints + tests.
    pub fn action_total(&self) -> Credits {
        self.category_total(Category::Inference)
            + self.category_total(Category::Hint)
            + self.category_total(Category::Test)
    }

    /// C_action + C_time. Penalties never count toward termination.
    pub fn termination_total(&self) -> Credits {
        self.action_total() + self.category_total(Category::Time)
    }

    /// C_action + C_time + C_penalty; the ranking tie-breaker.
    pub fn consumed_total(&self) -> Credits {
        self.termination_total() + self.category_total(Category::Penalty)
    }

    pub fn is_terminated(&self, config: &ContestConfig) -> bool {
        self.termination_total() >= config.credit_limit
    }
}

fn round_half_up(x: f64) -> Credits {
    if x <= 0.0 {
        0
    } else {
        (x + 0.5).floor() as Credits
    }
}

/// Token counts reported for one model call (or one turn).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub input_tokens: u64,
    pub output_tokens: u64,
}

impl TokenUsage {
    pub fn new(input_tokens: u64, output_tokens: u64) -> Self {
        TokenUsage {
            input_tokens,
            output_tokens,
        }
    }

    pub fn total(&self) -> u64 {
        self.input_tokens + self.output_tokens
    }
}

impl std::ops::Add for TokenUsage {
    type Output = TokenUsage;

    fn add(self, rhs: TokenUsage) -> TokenUsage {
        TokenUsage::new(
            self.input_tokens + rhs.input_tokens,
            self.output_tokens + rhs.output_tokens,
        )
    }
}

/// USD per million tokens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPrice {
    pub input_price: f64,
    pub output_price: f64,
}

impl ModelPrice {
    pub const fn new(input_price: f64, output_price: f64) -> Self {
        ModelPrice {
            input_price,
            output_price,
        }
    }

    /// Credits for the given token counts. USD/Mtok applied per token is
    /// exactly micro-USD per token, i.e. credits per token. Prices are fixed
    /// to six decimals and the product rounded half-up once.
    pub fn cost(&self, input_tokens: u64, output_tokens: u64) -> Credits {
        const SCALE: u128 = 1_000_000;
        let scaled = |price: f64| (price.max(0.0) * SCALE as f64).round() as u128;
        let total = input_tokens as u128 * scaled(self.input_price)
            + output_tokens as u128 * scaled(self.output_price);
        ((total + SCALE / 2) / SCALE) as Credits
    }
}

/// Static per-model API prices.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PriceTable {
    prices: BTreeMap<String, ModelPrice>,
}

impl PriceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The published September 2025 API prices for the benchmarked models.
    pub fn published() -> Self {
        let mut table = PriceTable::new();
        for (model, input, output) in [
            ("gpt-5-2025-08-07", 1.25, 10.00),
            ("gpt-5-codex", 1.25, 10.00),
            ("gemini-2.5-pro", 1.25, 10.00),
            ("claude-sonnet-4-20250514", 3.00, 15.00),
            ("deepseek-v3", 0.27, 1.10),
            ("deepseek-v3.1", 0.27, 1.10),
            ("qwen3-235b-a22b-instruct-2507", 0.70, 2.80),
            ("kimi-k2-0905", 1.00, 2.75),
            ("glm-4.5", 0.59, 2.19),
        ] {
            table.insert(model, ModelPrice::new(input, output));
        }
        table
    }

    pub fn insert(&mut self, model: impl Into<String>, price: ModelPrice) {
        self.prices.insert(model.into(), price);
    }

    pub fn price(&self, model: &str) -> Result<ModelPrice, LedgerError> {
        self.prices
            .get(model)
            .copied()
            .ok_or_else(|| LedgerError::UnknownModel(model.to_owned()))
    }

    pub fn models(&self) -> impl Iterator<Item = &str> {
        self.prices.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at() -> Stamp {
        Stamp::default()
    }

    #[test]
    fn inference_is_priced_in_micro_usd() {
        let mut ledger = CreditLedger::new();
        let gpt5 = ModelPrice::new(1.25, 10.0);
        assert_eq!(
            ledger.charge_inference(TokenUsage::new(1_000_000, 0), gpt5, at()),
            1_250_000
        );
        assert_eq!(
            ledger.charge_inference(TokenUsage::new(0, 0), gpt5, at()),
            0
        );
        let deepseek = PriceTable::published().price("deepseek-v3").unwrap();
        assert_eq!(
            ledger.charge_inference(TokenUsage::new(100_000, 50_000), deepseek, at()),
            82_000
        );
    }

    #[test]
    fn inference_rounds_half_up_once() {
        // 3 tokens at $0.5/Mtok = 1.5 credits -> 2; 1 token -> 0.5 -> 1
        let p = ModelPrice::new(0.5, 0.0);
        assert_eq!(p.cost(3, 0), 2);
        assert_eq!(p.cost(1, 0), 1);
        assert_eq!(ModelPrice::new(0.4, 0.0).cost(1, 0), 0);
    }

    #[test]
    fn unknown_model_is_an_error() {
        assert_eq!(
            PriceTable::published().price("gpt-9"),
            Err(LedgerError::UnknownModel("gpt-9".into()))
        );
    }

    #[test]
    fn hint_costs_follow_config() {
        let config = ContestConfig::default();
        let mut ledger = CreditLedger::new();
        assert_eq!(ledger.charge_hint(0, &config, at()), Ok(500));
        assert_eq!(ledger.charge_hint(4, &config, at()), Ok(1_500));
        assert_eq!(
            ledger.charge_hint(5, &config, at()),
            Err(LedgerError::HintLevelOutOfRange(5))
        );
        assert_eq!(ledger.category_total(Category::Hint), 2_000);
    }

    #[test]
    fn tests_are_charged_flat_per_request() {
        let mut config = ContestConfig::default();
        let mut ledger = CreditLedger::new();
        assert_eq!(ledger.charge_test(3, &config, at()), 10);
        ledger.charge_test(1, &config, at());
        assert_eq!(ledger.category_total(Category::Test), 20);
        config.test_cost = 0;
        assert_eq!(ledger.charge_test(5, &config, at()), 0);
    }

    #[test]
    fn time_accrual_is_linear_and_idempotent() {
        let mut config = ContestConfig::default();
        let mut ledger = CreditLedger::new();
        assert_eq!(ledger.accrue_time(600.0, &config, at()), 0);
        assert!(ledger.is_empty());

        config.alpha = 1.0;
        assert_eq!(ledger.accrue_time(300.0, &config, at()), 300);
        assert_eq!(ledger.accrue_time(300.0, &config, at()), 0);
        assert_eq!(ledger.category_total(Category::Time), 300);

        config.alpha = 0.5;
        let mut half = CreditLedger::new();
        half.accrue_time(40.0, &config, at());
        half.accrue_time(100.0, &config, at());
        assert_eq!(half.category_total(Category::Time), 50);
    }

    #[test]
    fn penalties_reject_accepted() {
        let config = ContestConfig::default();
        let mut ledger = CreditLedger::new();
        assert_eq!(ledger.add_penalty(Verdict::WA, &config, at()), Ok(100));
        assert_eq!(
            ledger.add_penalty(Verdict::AC, &config, at()),
            Err(LedgerError::PenaltyOnAccepted)
        );
        ledger.add_penalty(Verdict::WA, &config, at()).unwrap();
        ledger.add_penalty(Verdict::WA, &config, at()).unwrap();
        assert_eq!(ledger.category_total(Category::Penalty), 300);
    }

    #[test]
    fn penalties_do_not_count_toward_termination() {
        let config = ContestConfig::default();
        let mut ledger = CreditLedger::new();
        ledger.push(Category::Inference, 19_900_000, at());
        ledger.push(Category::Penalty, 1_000_000, at());
        assert_eq!(ledger.termination_total(), 19_900_000);
        assert_eq!(ledger.consumed_total(), 20_900_000);
        assert!(!ledger.is_terminated(&config));
    }

    #[test]
    fn totals_over_every_category() {
        let mut ledger = CreditLedger::new();
        assert_eq!(
            (ledger.termination_total(), ledger.consumed_total()),
            (0, 0)
        );
        for (c, a) in [
            (Category::Inference, 5_000),
            (Category::Hint, 500),
            (Category::Test, 10),
            (Category::Time, 300),
            (Category::Penalty, 100),
        ] {
            ledger.push(c, a, at());
        }
        assert_eq!(ledger.termination_total(), 5_810);
        assert_eq!(ledger.consumed_total(), 5_910);
    }

    #[test]
    fn termination_boundary_is_inclusive() {
        let mut config = ContestConfig::default();
        let mut ledger = CreditLedger::new();
        ledger.push(Category::Inference, 19_999_999, at());
        assert!(!ledger.is_terminated(&config));
        ledger.push(Category::Hint, 1, at());
        assert!(ledger.is_terminated(&config));

        config.credit_limit = 10_000_000;
        let low = CreditLedger::from_entries([LedgerEntry {
            category: Category::Inference,
            amount: 10_000_001,
            turn: 0,
            t_ms: 0,
        }]);
        assert!(low.is_terminated(&config));
    }

    #[test]
    fn deserialized_ledger_recomputes_sums() {
        let mut ledger = CreditLedger::new();
        ledger.push(Category::Hint, 500, Stamp::new(1, 20));
        ledger.push(Category::Penalty, 100, Stamp::new(2, 40));
        let json = serde_json::to_string(&ledger).unwrap();
        assert_eq!(
            json,
            r#"{"entries":[{"category":"Hint","amount":500,"turn":1,"t_ms":20},{"category":"Penalty","amount":100,"turn":2,"t_ms":40}]}"#
        );
        let back: CreditLedger = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ledger);
        assert_eq!(back.consumed_total(), 600);
    }
}
