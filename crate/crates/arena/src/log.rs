//! Line-delimited JSON match logs: a header, one record per turn or usage
//! report, and a footer written last. A log without a footer was cut short.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use arena_core::{
    rank, render_rankings, ContestConfig, CreditLedger, Credits, LeaderboardRow, LedgerEntry,
    ParticipantState, ParticipantStatus, ScoreTable, Verdict,
};
use arena_protocol::{
    ActionRequest, ActionResult, ErrorCode, Payload, ProblemEntry, UsageAck, UsageReport,
};
use serde::{Deserialize, Serialize};

use crate::agents::StrategyKind;
use crate::analytics::CreditBreakdown;
use crate::ArenaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Match,
    Qualification,
    Swarm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantInfo {
    pub id: String,
    pub agent: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<StrategyKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogHeader {
    pub mode: RunMode,
    pub contest_id: String,
    pub config: ContestConfig,
    pub seed: u64,
    pub participants: Vec<ParticipantInfo>,
    /// Problems the participants could see, with their point values.
    pub problems: Vec<ProblemEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TurnEvent {
    Action {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        request: Option<ActionRequest>,
        /// Set instead of `request` when the agent's text did not parse.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        raw: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        usage: Option<UsageReport>,
    },
    /// Usage reported outside an action. `overhead` marks swarm
    /// coordination traffic.
    Usage {
        report: UsageReport,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        overhead: bool,
    },
    /// The agent did not answer within the turn timeout.
    Skipped,
    /// The orchestrator ended the participant.
    Forced { reason: String },
}

impl TurnEvent {
    pub fn request(&self) -> Option<&ActionRequest> {
        match self {
            TurnEvent::Action { request, .. } => request.as_ref(),
            _ => None,
        }
    }

    /// Tokens this event reported, attached or standalone.
    pub fn usage(&self) -> Option<&UsageReport> {
        match self {
            TurnEvent::Action { usage, .. } => usage.as_ref(),
            TurnEvent::Usage { report, .. } => Some(report),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResultSummary {
    pub ok: bool,
    pub charged: Credits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorCode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint_source: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub duplicate: bool,
}

impl ResultSummary {
    pub fn of_result(result: &ActionResult) -> Self {
        let mut s = ResultSummary {
            ok: result.ok,
            charged: result.charged,
            error: result.error.as_ref().map(|e| e.code),
            ..Default::default()
        };
        match &result.payload {
            Some(Payload::Judgement(j)) => {
                s.verdict = Some(j.result.verdict);
                s.passed = Some(j.result.passed);
                s.total = Some(j.result.total);
            }
            Some(Payload::Hint(h)) => s.hint_source = Some(h.source_doc_id.clone()),
            _ => {}
        }
        s
    }

    pub fn of_ack(ack: &Result<UsageAck, arena_protocol::ProtocolError>) -> Self {
        match ack {
            // a duplicate echoes the original charge but bills nothing new
            Ok(a) => ResultSummary {
                ok: true,
                charged: if a.duplicate { 0 } else { a.charged },
                duplicate: a.duplicate,
                ..Default::default()
            },
            Err(e) => ResultSummary {
                ok: false,
                error: Some(e.code),
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusAfter {
    pub status: ParticipantStatus,
    pub score: u64,
    pub consumed_total: Credits,
    pub termination_total: Credits,
}

impl StatusAfter {
    pub fn of(participant: &ParticipantState, table: &ScoreTable) -> Self {
        StatusAfter {
            status: participant.status,
            score: participant
                .solved
                .iter()
                .filter_map(|p| table.points(p))
                .sum(),
            consumed_total: participant.ledger.consumed_total(),
            termination_total: participant.ledger.termination_total(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveMode {
    Parallel,
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveInfo {
    /// 1-based wave number; also the simulated tick.
    pub index: u64,
    pub width: usize,
    pub mode: WaveMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub participant: String,
    /// Session turns completed after this record.
    pub turn_index: u64,
    pub event: TurnEvent,
    pub result: ResultSummary,
    pub ledger_delta: Vec<LedgerEntry>,
    pub status_after: StatusAfter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveInfo>,
    /// Real milliseconds since the run started. Not reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantSummary {
    pub id: String,
    pub status: ParticipantStatus,
    pub score: u64,
    pub solved: Vec<String>,
    pub submissions: usize,
    pub consumed_total: Credits,
    pub termination_total: Credits,
    pub breakdown: CreditBreakdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogFooter {
    pub leaderboard: Vec<LeaderboardRow>,
    pub rankings_text: String,
    pub participants: Vec<ParticipantSummary>,
    /// Swarm waves run; absent for matches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ticks: Option<u64>,
    pub aborted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<String>,
}

impl LogFooter {
    /// Summarizes final participant states. `submissions` counts judged
    /// submissions per participant.
    pub fn build(
        states: &[ParticipantState],
        submissions: &BTreeMap<String, usize>,
        table: &ScoreTable,
        ticks: Option<u64>,
        abort_reason: Option<String>,
    ) -> Self {
        let leaderboard = rank(states, table);
        let participants = states
            .iter()
            .map(|p| ParticipantSummary {
                id: p.id.clone(),
                status: p.status,
                score: p.solved.iter().filter_map(|id| table.points(id)).sum(),
                solved: p.solved.iter().cloned().collect(),
                submissions: submissions.get(&p.id).copied().unwrap_or(0),
                consumed_total: p.ledger.consumed_total(),
                termination_total: p.ledger.termination_total(),
                breakdown: CreditBreakdown::from_entries(p.ledger.entries()),
            })
            .collect();
        LogFooter {
            rankings_text: render_rankings(&leaderboard),
            leaderboard,
            participants,
            ticks,
            aborted: abort_reason.is_some(),
            abort_reason,
            finished_at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LogRecord {
    Header(LogHeader),
    Turn(TurnRecord),
    Footer(LogFooter),
}

impl LogRecord {
    pub fn to_line(&self) -> String {
        let mut line = serde_json::to_string(self).expect("log records serialize");
        line.push('\n');
        line
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchLog {
    pub header: LogHeader,
    pub turns: Vec<TurnRecord>,
    pub footer: Option<LogFooter>,
}

impl MatchLog {
    pub fn new(header: LogHeader) -> Self {
        MatchLog {
            header,
            turns: Vec::new(),
            footer: None,
        }
    }

    pub fn footer(&self) -> Result<&LogFooter, ArenaError> {
        self.footer
            .as_ref()
            .ok_or_else(|| ArenaError::Log("log has no footer; the run did not finish".into()))
    }

    pub fn records(&self) -> impl Iterator<Item = LogRecord> + '_ {
        std::iter::once(LogRecord::Header(self.header.clone()))
            .chain(self.turns.iter().cloned().map(LogRecord::Turn))
            .chain(self.footer.iter().cloned().map(LogRecord::Footer))
    }

    pub fn to_jsonl(&self) -> String {
        self.records().map(|r| r.to_line()).collect()
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        out.write_all(self.to_jsonl().as_bytes())?;
        out.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ArenaError> {
        let path = path.as_ref();
        let mut file = fs::File::create(path).map_err(|e| ArenaError::io(path, e))?;
        self.write_to(&mut file)
            .and_then(|_| file.sync_all())
            .map_err(|e| ArenaError::io(path, e))
    }

    pub fn parse(text: &str) -> Result<Self, ArenaError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let record = |(n, line): (usize, &str)| {
            serde_json::from_str::<LogRecord>(line)
                .map_err(|e| ArenaError::Log(format!("line {}: {e}", n + 1)))
        };
        let header = match lines.next().map(record).transpose()? {
            Some(LogRecord::Header(h)) => h,
            _ => return Err(ArenaError::Log("first record must be the header".into())),
        };
        let mut log = MatchLog::new(header);
        for item in lines {
            let n = item.0 + 1;
            match record(item)? {
                LogRecord::Turn(t) if log.footer.is_none() => log.turns.push(t),
                LogRecord::Footer(f) if log.footer.is_none() => log.footer = Some(f),
                _ => return Err(ArenaError::Log(format!("line {n}: unexpected record"))),
            }
        }
        Ok(log)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArenaError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ArenaError::io(path, e))?;
        MatchLog::parse(&text)
    }

    /// The log with every real-time field cleared; two runs with the same
    /// seeds produce identical stripped logs.
    pub fn without_wall_clock(&self) -> Self {
        let mut log = self.clone();
        log.header.started_at = None;
        for t in &mut log.turns {
            t.wall_ms = None;
        }
        if let Some(f) = &mut log.footer {
            f.finished_at = None;
        }
        log
    }

    pub fn participant_ids(&self) -> impl Iterator<Item = &str> {
        self.header.participants.iter().map(|p| p.id.as_str())
    }

    pub fn turns_of<'a>(
        &'a self,
        participant: &'a str,
    ) -> impl Iterator<Item = &'a TurnRecord> + 'a {
        self.turns
            .iter()
            .filter(move |t| t.participant == participant)
    }

    pub fn score_table(&self) -> ScoreTable {
        let levels = self
            .header
            .problems
            .iter()
            .map(|p| (p.problem_id.as_str(), p.level));
        ScoreTable::new(levels, &self.header.config.score_weights)
    }

    /// Action requests per participant, in turn order.
    pub fn action_sequence(&self, participant: &str) -> Vec<ActionRequest> {
        self.turns_of(participant)
            .filter_map(|t| t.event.request().cloned())
            .collect()
    }
}

/// Recomputes the footer from turn records alone and checks every running
/// total along the way.
pub fn replay(log: &MatchLog) -> Result<LogFooter, ArenaError> {
    let table = log.score_table();
    let mismatch = |m: String| Err(ArenaError::ReplayMismatch(m));
    let mut states: BTreeMap<&str, ParticipantState> = log
        .participant_ids()
        .map(|id| (id, ParticipantState::new(id)))
        .collect();
    let mut entries: BTreeMap<&str, Vec<LedgerEntry>> = BTreeMap::new();
    let mut submissions: BTreeMap<String, usize> = BTreeMap::new();
    let mut waves = BTreeSet::new();
    for (n, t) in log.turns.iter().enumerate() {
        let Some(state) = states.get_mut(t.participant.as_str()) else {
            return mismatch(format!(
                "record {n} names unknown participant `{}`",
                t.participant
            ));
        };
        if state.status == ParticipantStatus::Terminated {
            return mismatch(format!(
                "record {n}: `{}` acted after termination",
                t.participant
            ));
        }
        let delta: Credits = t.ledger_delta.iter().map(|e| e.amount).sum();
        if delta != t.result.charged {
            return mismatch(format!(
                "record {n}: delta {delta} != charged {}",
                t.result.charged
            ));
        }
        let list = entries.entry(t.participant.as_str()).or_default();
        list.extend(t.ledger_delta.iter().copied());
        if let (Some(ActionRequest::SubmitSolution { problem_id, .. }), Some(verdict)) =
            (t.event.request(), t.result.verdict)
        {
            *submissions.entry(state.id.clone()).or_default() += 1;
            if verdict == Verdict::AC {
                state.solved.insert(problem_id.clone());
            }
        }
        state.status = t.status_after.status;
        let ledger = CreditLedger::from_entries(list.iter().copied());
        let recomputed = StatusAfter::of(
            &ParticipantState {
                ledger,
                ..state.clone()
            },
            &table,
        );
        if recomputed != t.status_after {
            return mismatch(format!(
                "record {n}: status {:?} != logged {:?}",
                recomputed, t.status_after
            ));
        }
        if let Some(w) = t.wave {
            waves.insert(w.index);
        }
    }
    let finals: Vec<ParticipantState> = log
        .participant_ids()
        .filter_map(|id| {
            let mut s = states.remove(id)?;
            s.ledger = CreditLedger::from_entries(entries.remove(id).unwrap_or_default());
            Some(s)
        })
        .collect();
    let ticks = (log.header.mode == RunMode::Swarm).then_some(waves.len() as u64);
    let abort = log.footer.as_ref().and_then(|f| f.abort_reason.clone());
    Ok(LogFooter::build(
        &finals,
        &submissions,
        &table,
        ticks,
        abort,
    ))
}
