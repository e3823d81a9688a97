//! Metrics recomputed from match logs. Everything here is a pure function
//! of the log.

use std::collections::{BTreeMap, BTreeSet};

use arena_core::{Category, Credits, LedgerEntry, Verdict};
use arena_protocol::ActionRequest;
use serde::{Deserialize, Serialize};

use crate::log::{MatchLog, TurnEvent};
use crate::orchestrator::SeriesResult;
use crate::ArenaError;

/// How "attempted" is counted, echoed in profile output.
pub const ATTEMPTED_DEFINITION: &str = "problems with at least one judged submission";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreditBreakdown {
    pub inference: Credits,
    pub hint: Credits,
    pub test: Credits,
    pub time: Credits,
    pub penalty: Credits,
    pub total: Credits,
}

impl CreditBreakdown {
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = &'a LedgerEntry>) -> Self {
        let mut b = CreditBreakdown::default();
        for e in entries {
            let slot = match e.category {
                Category::Inference => &mut b.inference,
                Category::Hint => &mut b.hint,
                Category::Test => &mut b.test,
                Category::Time => &mut b.time,
                Category::Penalty => &mut b.penalty,
            };
            *slot += e.amount;
            b.total += e.amount;
        }
        b
    }

    pub fn get(&self, category: Category) -> Credits {
        match category {
            Category::Inference => self.inference,
            Category::Hint => self.hint,
            Category::Test => self.test,
            Category::Time => self.time,
            Category::Penalty => self.penalty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfileMetrics {
    pub attempted_problems: usize,
    pub submission_count: usize,
    pub solved_problems: usize,
    /// AC submissions over all submissions.
    pub submission_precision: Option<f64>,
    /// Solved problems over attempted problems.
    pub problems_solve_rate: Option<f64>,
    /// Problems accepted on their first submission over solved problems.
    pub first_submit_accuracy: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn require(log: &MatchLog, participant: &str) -> Result<(), ArenaError> {
    if log.participant_ids().any(|p| p == participant) {
        Ok(())
    } else {
        Err(ArenaError::UnknownParticipant(participant.to_string()))
    }
}

/// Judged submissions (problem, verdict) in order. Rejected requests such
/// as unknown problems never reached the judge and are not counted.
fn submissions<'a>(
    log: &'a MatchLog,
    participant: &'a str,
) -> impl Iterator<Item = (&'a str, Verdict)> + 'a {
    log.turns_of(participant)
        .filter_map(|t| match (t.event.request(), t.result.verdict) {
            (Some(ActionRequest::SubmitSolution { problem_id, .. }), Some(v)) => {
                Some((problem_id.as_str(), v))
            }
            _ => None,
        })
}

pub fn profile(log: &MatchLog, participant: &str) -> Result<StrategyProfileMetrics, ArenaError> {
    require(log, participant)?;
    let mut attempted = BTreeSet::new();
    let mut solved = BTreeSet::new();
    let mut first: BTreeMap<&str, Verdict> = BTreeMap::new();
    let (mut count, mut accepted) = (0, 0);
    for (problem, verdict) in submissions(log, participant) {
        count += 1;
        attempted.insert(problem);
        first.entry(problem).or_insert(verdict);
        if verdict == Verdict::AC {
            accepted += 1;
            solved.insert(problem);
        }
    }
    let first_try = first.values().filter(|v| **v == Verdict::AC).count();
    Ok(StrategyProfileMetrics {
        attempted_problems: attempted.len(),
        submission_count: count,
        solved_problems: solved.len(),
        submission_precision: ratio(accepted, count),
        problems_solve_rate: ratio(solved.len(), attempted.len()),
        first_submit_accuracy: ratio(first_try, solved.len()),
    })
}

pub fn breakdown(log: &MatchLog, participant: &str) -> Result<CreditBreakdown, ArenaError> {
    require(log, participant)?;
    Ok(CreditBreakdown::from_entries(
        log.turns_of(participant)
            .flat_map(|t| t.ledger_delta.iter()),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmMetrics {
    pub ticks: u64,
    /// Ticks times the per-tick duration, in simulated milliseconds.
    pub wall_ms: u64,
    pub total_tokens: u64,
    pub comm_tokens: u64,
    pub score: u64,
    pub consumed_total: Credits,
    /// First wave run sequentially after a parallel one, if any.
    pub switched_at_wave: Option<u64>,
}

pub fn swarm_metrics(log: &MatchLog, tick_ms: u64) -> Result<SwarmMetrics, ArenaError> {
    let footer = log.footer()?;
    let summary = footer
        .participants
        .first()
        .ok_or_else(|| ArenaError::Log("swarm log has no participant".into()))?;
    let (mut total, mut comm) = (0, 0);
    let mut last_parallel = false;
    let mut switched_at_wave = None;
    for t in &log.turns {
        if let Some(u) = t.event.usage() {
            total += u.input_tokens + u.output_tokens;
            if matches!(t.event, TurnEvent::Usage { overhead: true, .. }) {
                comm += u.input_tokens + u.output_tokens;
            }
        }
        if let Some(w) = t.wave {
            let parallel = w.mode == crate::log::WaveMode::Parallel;
            if last_parallel && !parallel && switched_at_wave.is_none() {
                switched_at_wave = Some(w.index);
            }
            last_parallel = parallel;
        }
    }
    let ticks = footer.ticks.unwrap_or(0);
    Ok(SwarmMetrics {
        ticks,
        wall_ms: ticks * tick_ms,
        total_tokens: total,
        comm_tokens: comm,
        score: summary.score,
        consumed_total: summary.consumed_total,
        switched_at_wave,
    })
}

/// Participants as rows, config labels as columns, mean scores as cells.
pub fn ablation_matrix(series: &[(String, SeriesResult)]) -> Result<String, ArenaError> {
    let Some((_, first)) = series.first() else {
        return Ok(String::new());
    };
    let participants = first.participants();
    for (label, s) in series {
        if s.participants() != participants {
            return Err(ArenaError::MismatchedParticipants(format!(
                "`{label}` has {:?}, expected {:?}",
                s.participants(),
                participants
            )));
        }
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("participant").chain(series.iter().map(|(l, _)| l.as_str()));
    out.write_record(header)
        .map_err(|e| ArenaError::Log(e.to_string()))?;
    for p in participants {
        let mut row = vec![p.to_string()];
        for (_, s) in series {
            let mean = s.aggregate(p).expect("participant sets match").score.mean;
            row.push(format!("{mean}"));
        }
        out.write_record(&row)
            .map_err(|e| ArenaError::Log(e.to_string()))?;
    }
    let bytes = out
        .into_inner()
        .map_err(|e| ArenaError::Log(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
