//! Match orchestration, scripted agents, swarm simulation and post-hoc
//! analytics for the coding arena.
//!
//! A match drives one [`arena_protocol::Session`] per participant in a
//! deterministic round-robin and records every turn into a [`MatchLog`].
//! Logs are self-contained: the footer can be recomputed from the turn
//! records alone, which is what [`replay`] does.

pub mod agents;
pub mod analytics;
pub mod book;
pub mod endpoint;
pub mod grid;
pub mod log;
pub mod orchestrator;
pub mod swarm;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use agents::{
    step, AgentState, AgentsFile, ProfileParameters, ScriptedAgent, StrategyKind, StrategyProfile,
};
pub use analytics::{
    ablation_matrix, breakdown, profile, swarm_metrics, CreditBreakdown, StrategyProfileMetrics,
    SwarmMetrics,
};
pub use book::{CannedSolutionBook, ScriptedSubmission};
pub use endpoint::{AgentEndpoint, AgentSource, AgentTurn, ProcessAgent, Proposal};
pub use grid::{run_grid, AblationGrid, ConfigOverrides, GridConfig, WeightScheme};
pub use log::{
    replay, LogFooter, LogHeader, LogRecord, MatchLog, ParticipantInfo, ParticipantSummary,
    ResultSummary, RunMode, StatusAfter, TurnEvent, TurnRecord, WaveInfo, WaveMode,
};
pub use orchestrator::{
    run_match, run_qualification, run_series, MatchOptions, Qualification, RunSummary,
    SeriesAggregate, SeriesResult, Stat,
};
pub use swarm::{comm_tokens_per_wave, simulate_swarm, SwarmOptions};

#[derive(Debug, Error)]
pub enum ArenaError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid solution book: {0}")]
    InvalidBook(String),
    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown participant `{0}`")]
    UnknownParticipant(String),
    #[error("contest has no qualification problem")]
    NoQualificationProblem,
    #[error("agent `{agent}` failed: {message}")]
    Agent { agent: String, message: String },
    #[error("malformed match log: {0}")]
    Log(String),
    #[error("replay does not match the log: {0}")]
    ReplayMismatch(String),
    #[error("series have different participant sets: {0}")]
    MismatchedParticipants(String),
    #[error("a series needs at least one run")]
    NoRuns,
    #[error(transparent)]
    Manifest(#[from] arena_core::ManifestError),
}

impl ArenaError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ArenaError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, e: impl ToString) -> Self {
        ArenaError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}
