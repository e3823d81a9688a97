//! Weighted scoring and the leaderboard order.
//!
//! Rows sort by score (descending), then consumed credit including
//! penalties (ascending), then participant id (ascending) so that the order
//! is total and reproducible.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::level::{DifficultyLevel, PerLevel};
use crate::manifest::Contest;
use crate::participant::{ParticipantState, ParticipantStatus};
use crate::Credits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScoreError {
    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),
}

/// Points awarded per problem id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreTable {
    points: BTreeMap<String, u64>,
}

impl ScoreTable {
    pub fn new<'a>(
        levels: impl IntoIterator<Item = (&'a str, DifficultyLevel)>,
        weights: &PerLevel<u64>,
    ) -> Self {
        let points = levels
            .into_iter()
            .map(|(id, level)| (id.to_owned(), weights.get(level)))
            .collect();
        ScoreTable { points }
    }

    pub fn for_contest(contest: &Contest) -> Self {
        Self::new(
            contest.problems.iter().map(|p| (p.id.as_str(), p.level)),
            &contest.config.score_weights,
        )
    }

    pub fn points(&self, problem_id: &str) -> Option<u64> {
        self.points.get(problem_id).copied()
    }

    /// Sum of weights over solved problems. All-or-nothing per problem.
    pub fn score<'a>(
        &self,
        solved: impl IntoIterator<Item = &'a String>,
    ) -> Result<u64, ScoreError> {
        solved.into_iter().try_fold(0, |acc, id| {
            self.points(id)
                .map(|p| acc + p)
                .ok_or_else(|| ScoreError::UnknownProblem(id.clone()))
        })
    }
}

pub fn score<'a>(
    solved: impl IntoIterator<Item = &'a String>,
    contest: &Contest,
) -> Result<u64, ScoreError> {
    ScoreTable::for_contest(contest).score(solved)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RowStatus {
    Active,
    Terminated,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Active => "ACTIVE",
            RowStatus::Terminated => "TERMINATED",
        }
    }
}

impl From<ParticipantStatus> for RowStatus {
    fn from(status: ParticipantStatus) -> Self {
        match status {
            ParticipantStatus::Active => RowStatus::Active,
            ParticipantStatus::Terminated | ParticipantStatus::Withdrawn => RowStatus::Terminated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub participant_id: String,
    pub score: u64,
    /// Consumed total, penalties included.
    pub tiebreak: Credits,
    pub status: RowStatus,
}

/// Orders participants into leaderboard rows. Problems unknown to `table`
/// contribute nothing.
pub fn rank<'a>(
    participants: impl IntoIterator<Item = &'a ParticipantState>,
    table: &ScoreTable,
) -> Vec<LeaderboardRow> {
    let mut rows: Vec<LeaderboardRow> = participants
        .into_iter()
        .map(|p| LeaderboardRow {
            participant_id: p.id.clone(),
            score: p.solved.iter().filter_map(|id| table.points(id)).sum(),
            tiebreak: p.ledger.consumed_total(),
            status: p.status.into(),
        })
        .collect();
    rows.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then(a.tiebreak.cmp(&b.tiebreak))
            .then_with(|| a.participant_id.cmp(&b.participant_id))
    });
    rows
}

/// `1. <id>: Score <S>, Credit+Penalty: <C> [ACTIVE]`, one line per row.
pub fn render_rankings(rows: &[LeaderboardRow]) -> String {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}. {}: Score {}, Credit+Penalty: {} [{}]",
            i + 1,
            row.participant_id,
            row.score,
            row.tiebreak,
            row.status.as_str()
        );
    }
    out
}
