//! Contest model, unified credit ledger, and scoring for the coding arena.
//!
//! Everything an agent does in a contest is priced in credits. This crate
//! holds the pieces every other crate agrees on: the contest configuration
//! and problem corpus, the per-participant [`CreditLedger`], and the
//! weighted-score leaderboard with credit tie-breaking.

pub mod config;
pub mod ledger;
pub mod level;
pub mod manifest;
pub mod participant;
pub mod problem;
pub mod scoring;
pub mod verdict;

pub use config::{validate_config, ConfigViolation, ContestConfig, JudgeSettings, PenaltySchedule};
pub use ledger::{
    Category, CreditLedger, LedgerEntry, LedgerError, ModelPrice, PriceTable, Stamp, TokenUsage,
};
pub use level::{DifficultyLevel, PerLevel};
pub use manifest::{load_contest, Contest, ManifestError};
pub use participant::{ParticipantState, ParticipantStatus, StatusError, SubmissionRecord};
pub use problem::{outputs_match, Problem, TestCase};
pub use scoring::{
    rank, render_rankings, score, LeaderboardRow, RowStatus, ScoreError, ScoreTable,
};
pub use verdict::{LanguageId, Verdict};

/// Credits are integral; 1 credit is one micro-USD of normalized API spend.
pub type Credits = u64;
