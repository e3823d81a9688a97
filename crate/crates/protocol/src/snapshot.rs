use std::fmt::Write as _;

use arena_core::{
    render_rankings, Category, Contest, Credits, DifficultyLevel, LanguageId, LeaderboardRow,
    ParticipantState, ParticipantStatus, PenaltySchedule, PerLevel, ScoreTable,
};
use serde::{Deserialize, Serialize};

use crate::action::ActionKind;

/// The economy as shown to agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulesDigest {
    pub credit_limit: Credits,
    pub score_weights: PerLevel<u64>,
    pub hint_costs: [Credits; 5],
    pub test_cost: Credits,
    pub test_cost_per_case: Credits,
    pub penalties: PenaltySchedule,
    pub alpha: f64,
    pub languages: Vec<LanguageId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusView {
    pub name: String,
    pub status: ParticipantStatus,
    /// Ledger consumed total, penalties included.
    pub consumed_credit: Credits,
    pub solved: Vec<String>,
    pub score: u64,
    pub penalty: Credits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemEntry {
    pub problem_id: String,
    pub level: DifficultyLevel,
    pub points: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub rules: RulesDigest,
    pub status: StatusView,
    pub problems: Vec<ProblemEntry>,
    pub rankings: Vec<LeaderboardRow>,
    pub rankings_text: String,
    pub available_actions: Vec<ActionKind>,
    /// Turns completed so far.
    pub turn_index: u64,
}

/// Builds the snapshot an agent sees before its next turn. `visible` limits
/// the problem list (qualification shows a single problem).
pub fn render_state(
    participant: &ParticipantState,
    contest: &Contest,
    visible: &[String],
    rankings: Vec<LeaderboardRow>,
    languages: Vec<LanguageId>,
    turn_index: u64,
) -> StateSnapshot {
    let table = ScoreTable::for_contest(contest);
    let config = &contest.config;
    let problems = contest
        .problems
        .iter()
        .filter(|p| visible.iter().any(|v| v == &p.id))
        .map(|p| ProblemEntry {
            problem_id: p.id.clone(),
            level: p.level,
            points: config.score_weights.get(p.level),
        })
        .collect();
    let rankings_text = render_rankings(&rankings);
    StateSnapshot {
        rules: RulesDigest {
            credit_limit: config.credit_limit,
            score_weights: config.score_weights,
            hint_costs: config.hint_costs,
            test_cost: config.test_cost,
            test_cost_per_case: config.test_cost_per_case,
            penalties: config.penalty_schedule,
            alpha: config.alpha,
            languages,
        },
        status: StatusView {
            name: participant.id.clone(),
            status: participant.status,
            consumed_credit: participant.ledger.consumed_total(),
            solved: participant.solved.iter().cloned().collect(),
            score: table.score(&participant.solved).unwrap_or(0),
            penalty: participant.ledger.category_total(Category::Penalty),
        },
        problems,
        rankings,
        rankings_text,
        available_actions: if participant.is_active() {
            ActionKind::ALL.to_vec()
        } else {
            Vec::new()
        },
        turn_index,
    }
}

impl StateSnapshot {
    /// Plain-text rendering with the usual prompt sections.
    pub fn to_text(&self) -> String {
        let r = &self.rules;
        let w = &r.score_weights;
        let mut out = String::new();
        let _ = writeln!(out, "## Competition Rules");
        let _ = writeln!(out, "- Credit limit: {}", r.credit_limit);
        let _ = writeln!(
            out,
            "- Points: Bronze ({}), Silver ({}), Gold ({}), Platinum ({})",
            w.bronze, w.silver, w.gold, w.platinum
        );
        let _ = writeln!(
            out,
            "- Hint costs (levels 0-4): {}",
            r.hint_costs
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        );
        let _ = writeln!(out, "- Test cost: {}", r.test_cost);
        let p = &r.penalties;
        let _ = writeln!(
            out,
            "- Penalties: CE {}, MLE {}, RE {}, TLE {}, WA {}",
            p.ce, p.mle, p.re, p.tle, p.wa
        );
        let langs: Vec<_> = r.languages.iter().map(|l| l.as_str()).collect();
        let _ = writeln!(out, "- Languages: {}", langs.join(", "));
        let _ = writeln!(out, "\n## Your Status");
        let s = &self.status;
        let _ = writeln!(out, "- Name: {}", s.name);
        let _ = writeln!(out, "- Consumed Credit: {}", s.consumed_credit);
        let _ = writeln!(out, "- Solved Problems: {}", s.solved.join(", "));
        let _ = writeln!(out, "- Current Score: {}", s.score);
        let _ = writeln!(out, "- Penalty: {}", s.penalty);
        let _ = writeln!(out, "\n## Available Problems");
        for p in &self.problems {
            let _ = writeln!(out, "- {} ({}, {} points)", p.problem_id, p.level, p.points);
        }
        let _ = writeln!(
            out,
            "\n## Current Rankings\n{}",
            self.rankings_text.trim_end()
        );
        let _ = writeln!(out, "\n## Available Actions");
        for (i, a) in self.available_actions.iter().enumerate() {
            let _ = writeln!(out, "{}. {}: {}", i + 1, a, a.description());
        }
        out
    }
}
