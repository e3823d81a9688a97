//! Qualification, matches and multi-run series.
//!
//! Matches are run as a deterministic round-robin: each round, every active
//! participant takes one turn in join order. Sessions use a simulated clock
//! (a fixed number of milliseconds per turn), so scripted runs reproduce
//! byte for byte apart from the wall-clock fields.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use arena_core::{LeaderboardRow, ParticipantState, ScoreTable};
use arena_protocol::{
    parse_action, Clock, ProblemEntry, Services, Session, Standings, UsageReport,
};
use serde::{Deserialize, Serialize};

use crate::endpoint::{AgentEndpoint, AgentSource, Proposal};
use crate::log::{
    LogFooter, LogHeader, LogRecord, MatchLog, ParticipantInfo, ResultSummary, RunMode,
    StatusAfter, TurnEvent, TurnRecord,
};
use crate::ArenaError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchOptions {
    pub seed: u64,
    /// Turns after which the orchestrator ends a participant.
    pub max_turns: u64,
    /// Simulated session time per turn.
    pub ms_per_turn: u64,
    /// Stamp logs with real timestamps.
    pub wall_clock: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            seed: 0,
            max_turns: 400,
            ms_per_turn: 30_000,
            wall_clock: true,
        }
    }
}

pub(crate) fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Appends records to the in-memory log and, when given, to a sink.
pub(crate) struct Recorder<'a> {
    pub log: MatchLog,
    sink: Option<&'a mut dyn Write>,
    started: Instant,
    wall_clock: bool,
}

impl<'a> Recorder<'a> {
    pub fn start(
        mut header: LogHeader,
        wall_clock: bool,
        mut sink: Option<&'a mut dyn Write>,
    ) -> Result<Self, ArenaError> {
        if wall_clock {
            header.started_at = Some(now_rfc3339());
        }
        let record = LogRecord::Header(header.clone());
        write_line(&mut sink, &record)?;
        Ok(Recorder {
            log: MatchLog::new(header),
            sink,
            started: Instant::now(),
            wall_clock,
        })
    }

    pub fn push(&mut self, mut record: TurnRecord) -> Result<(), ArenaError> {
        if self.wall_clock {
            record.wall_ms = Some(self.started.elapsed().as_millis() as u64);
        }
        let line = LogRecord::Turn(record);
        write_line(&mut self.sink, &line)?;
        if let LogRecord::Turn(record) = line {
            self.log.turns.push(record);
        }
        Ok(())
    }

    pub fn finish(mut self, mut footer: LogFooter) -> Result<MatchLog, ArenaError> {
        if self.wall_clock {
            footer.finished_at = Some(now_rfc3339());
        }
        let record = LogRecord::Footer(footer);
        write_line(&mut self.sink, &record)?;
        if let LogRecord::Footer(footer) = record {
            self.log.footer = Some(footer);
        }
        Ok(self.log)
    }
}

fn write_line(sink: &mut Option<&mut dyn Write>, record: &LogRecord) -> Result<(), ArenaError> {
    if let Some(out) = sink {
        out.write_all(record.to_line().as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| ArenaError::Log(format!("cannot write log: {e}")))?;
    }
    Ok(())
}

pub(crate) fn problem_entries(services: &Services) -> Vec<ProblemEntry> {
    let weights = &services.contest.config.score_weights;
    services
        .contest
        .problems
        .iter()
        .map(|p| ProblemEntry {
            problem_id: p.id.clone(),
            level: p.level,
            points: weights.get(p.level),
        })
        .collect()
}

/// Unique participant ids: a repeated name gets `-1`, `-2`, ... suffixes.
fn participant_ids(names: &[String]) -> Vec<String> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for n in names {
        *counts.entry(n).or_default() += 1;
    }
    let mut seen: HashMap<&str, usize> = HashMap::new();
    names
        .iter()
        .map(|n| {
            if counts[n.as_str()] == 1 {
                return n.clone();
            }
            let k = seen.entry(n).or_default();
            *k += 1;
            format!("{n}-{k}")
        })
        .collect()
}

/// Plays one turn: asks the agent, applies its proposal, and records the
/// standalone usage reports and the turn. An `Err` is an agent failure.
pub(crate) fn play_turn(
    session: &mut Session,
    agent: &mut dyn AgentEndpoint,
    table: &ScoreTable,
    recorder: &mut Recorder<'_>,
) -> Result<(), ArenaError> {
    let snapshot = session.snapshot();
    let mut usage_records = Vec::new();
    let turn = {
        let id = session.participant().id.clone();
        let mut report = |usage: &UsageReport| {
            let before = session.participant().ledger.len();
            let was_active = session.is_active();
            let ack = session.report_usage(usage);
            if was_active {
                usage_records.push(TurnRecord {
                    participant: id.clone(),
                    turn_index: session.turn_index(),
                    event: TurnEvent::Usage {
                        report: usage.clone(),
                        overhead: false,
                    },
                    result: ResultSummary::of_ack(&ack),
                    ledger_delta: session.participant().ledger.entries_since(before).to_vec(),
                    status_after: StatusAfter::of(session.participant(), table),
                    wave: None,
                    wall_ms: None,
                });
            }
            ack
        };
        agent.act(&snapshot, &mut report)
    };
    for record in usage_records {
        recorder.push(record)?;
    }
    let turn = turn?;
    if !session.is_active() {
        // a standalone usage report ended the participant
        return Ok(());
    }
    let before = session.participant().ledger.len();
    let usage = turn.usage;
    let (event, result) = match turn.proposal {
        Proposal::Action(request) => {
            let result = session.apply_action(&request, usage.as_ref());
            (
                TurnEvent::Action {
                    request: Some(request),
                    raw: None,
                    usage,
                },
                result,
            )
        }
        Proposal::Raw(text) => {
            let result = session.apply_raw(text.as_bytes(), usage.as_ref());
            let event = match parse_action(text.as_bytes()) {
                Ok(request) => TurnEvent::Action {
                    request: Some(request),
                    raw: None,
                    usage,
                },
                Err(_) => TurnEvent::Action {
                    request: None,
                    raw: Some(text),
                    usage,
                },
            };
            (event, result)
        }
        Proposal::Skip => (TurnEvent::Skipped, session.skip_turn()),
    };
    recorder.push(TurnRecord {
        participant: session.participant().id.clone(),
        turn_index: session.turn_index(),
        event,
        result: ResultSummary::of_result(&result),
        ledger_delta: session.participant().ledger.entries_since(before).to_vec(),
        status_after: StatusAfter::of(session.participant(), table),
        wave: None,
        wall_ms: None,
    })?;
    agent.observe(&result)
}

fn force_end(
    session: &mut Session,
    reason: &str,
    table: &ScoreTable,
    recorder: &mut Recorder<'_>,
) -> Result<(), ArenaError> {
    if !session.force_terminate() {
        return Ok(());
    }
    recorder.push(TurnRecord {
        participant: session.participant().id.clone(),
        turn_index: session.turn_index(),
        event: TurnEvent::Forced {
            reason: reason.to_string(),
        },
        result: ResultSummary::default(),
        ledger_delta: Vec::new(),
        status_after: StatusAfter::of(session.participant(), table),
        wave: None,
        wall_ms: None,
    })
}

fn end_reason(session: &Session) -> String {
    format!("{:?}", session.participant().status).to_lowercase()
}

pub(crate) fn footer_for(
    sessions: &[&Session],
    table: &ScoreTable,
    ticks: Option<u64>,
    abort: Option<String>,
) -> LogFooter {
    let states: Vec<ParticipantState> = sessions.iter().map(|s| s.participant().clone()).collect();
    let submissions: BTreeMap<String, usize> = states
        .iter()
        .map(|p| (p.id.clone(), p.submissions.len()))
        .collect();
    LogFooter::build(&states, &submissions, table, ticks, abort)
}

/// Runs every agent to Withdrawn or Terminated. Agent failures end the
/// match early with the footer marked aborted.
pub fn run_match(
    services: Arc<Services>,
    mut agents: Vec<Box<dyn AgentEndpoint>>,
    options: &MatchOptions,
    sink: Option<&mut dyn Write>,
) -> Result<MatchLog, ArenaError> {
    let table = ScoreTable::for_contest(&services.contest);
    let standings = Arc::new(Standings::default());
    let names: Vec<String> = agents.iter().map(|a| a.name()).collect();
    let ids = participant_ids(&names);
    let mut sessions: Vec<Session> = ids
        .iter()
        .map(|id| {
            Session::new(
                Arc::clone(&services),
                id,
                Clock::Simulated {
                    ms_per_turn: options.ms_per_turn,
                },
            )
            .with_standings(Arc::clone(&standings))
        })
        .collect();
    let header = LogHeader {
        mode: RunMode::Match,
        contest_id: services.contest.id.clone(),
        config: services.contest.config.clone(),
        seed: options.seed,
        participants: ids
            .iter()
            .zip(&agents)
            .map(|(id, a)| ParticipantInfo {
                id: id.clone(),
                agent: a.descriptor(),
                kind: a.kind(),
            })
            .collect(),
        problems: problem_entries(&services),
        started_at: None,
    };
    let mut recorder = Recorder::start(header, options.wall_clock, sink)?;
    let mut abort = None;
    'rounds: loop {
        let mut any_active = false;
        for (session, agent) in sessions.iter_mut().zip(agents.iter_mut()) {
            if !session.is_active() {
                continue;
            }
            any_active = true;
            if session.turn_index() >= options.max_turns {
                force_end(
                    session,
                    &format!("turn limit of {} reached", options.max_turns),
                    &table,
                    &mut recorder,
                )?;
                continue;
            }
            match play_turn(session, agent.as_mut(), &table, &mut recorder) {
                Ok(()) => {}
                Err(e @ ArenaError::Log(_)) => return Err(e),
                Err(e) => {
                    abort = Some(e.to_string());
                    break 'rounds;
                }
            }
        }
        if !any_active {
            break;
        }
    }
    for (session, agent) in sessions.iter().zip(agents.iter_mut()) {
        agent.finish(&end_reason(session), &session.snapshot());
    }
    let refs: Vec<&Session> = sessions.iter().collect();
    recorder.finish(footer_for(&refs, &table, None, abort))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Qualification {
    pub qualified: bool,
    pub log: MatchLog,
}

/// Shows only the contest's designated easiest Bronze problem, under the
/// normal economy, until the agent solves it or its session ends.
pub fn run_qualification(
    services: Arc<Services>,
    mut agent: Box<dyn AgentEndpoint>,
    options: &MatchOptions,
    sink: Option<&mut dyn Write>,
) -> Result<Qualification, ArenaError> {
    let problem = services
        .contest
        .qualification_problem
        .clone()
        .ok_or(ArenaError::NoQualificationProblem)?;
    let table = ScoreTable::for_contest(&services.contest);
    let visible = [problem.clone()];
    let mut session = Session::new(
        Arc::clone(&services),
        agent.name(),
        Clock::Simulated {
            ms_per_turn: options.ms_per_turn,
        },
    )
    .restrict_to(&visible);
    let header = LogHeader {
        mode: RunMode::Qualification,
        contest_id: services.contest.id.clone(),
        config: services.contest.config.clone(),
        seed: options.seed,
        participants: vec![ParticipantInfo {
            id: agent.name(),
            agent: agent.descriptor(),
            kind: agent.kind(),
        }],
        problems: session.snapshot().problems,
        started_at: None,
    };
    let mut recorder = Recorder::start(header, options.wall_clock, sink)?;
    let mut abort = None;
    while session.is_active() && !session.participant().solved.contains(&problem) {
        if session.turn_index() >= options.max_turns {
            force_end(
                &mut session,
                &format!("turn limit of {} reached", options.max_turns),
                &table,
                &mut recorder,
            )?;
            break;
        }
        match play_turn(&mut session, agent.as_mut(), &table, &mut recorder) {
            Ok(()) => {}
            Err(e @ ArenaError::Log(_)) => return Err(e),
            Err(e) => {
                abort = Some(e.to_string());
                break;
            }
        }
    }
    let qualified = session.participant().solved.contains(&problem);
    agent.finish(
        if qualified {
            "qualified"
        } else {
            "not_qualified"
        },
        &session.snapshot(),
    );
    let log = recorder.finish(footer_for(&[&session], &table, None, abort))?;
    Ok(Qualification { qualified, log })
}

/// Mean and sample standard deviation; the deviation is absent for a
/// single value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: Option<f64>,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = (values.len() > 1)
            .then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
        Some(Stat { mean, std })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub leaderboard: Vec<LeaderboardRow>,
    pub aborted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesAggregate {
    pub participant: String,
    pub score: Stat,
    pub consumed_credit: Stat,
    /// 1-based leaderboard position.
    pub rank: Stat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub runs: Vec<RunSummary>,
    /// Sorted by participant id.
    pub aggregates: Vec<SeriesAggregate>,
}

impl SeriesResult {
    /// Aggregates per-run leaderboards. Every run must list the same
    /// participants.
    pub fn from_runs(runs: Vec<RunSummary>) -> Result<Self, ArenaError> {
        let first = runs.first().ok_or(ArenaError::NoRuns)?;
        let mut ids: Vec<String> = first
            .leaderboard
            .iter()
            .map(|r| r.participant_id.clone())
            .collect();
        ids.sort();
        let mut aggregates = Vec::with_capacity(ids.len());
        for id in &ids {
            let (mut score, mut credit, mut rank) = (Vec::new(), Vec::new(), Vec::new());
            for run in &runs {
                let (pos, row) = run
                    .leaderboard
                    .iter()
                    .enumerate()
                    .find(|(_, r)| &r.participant_id == id)
                    .ok_or_else(|| {
                        ArenaError::MismatchedParticipants(format!(
                            "run seed {} lacks `{id}`",
                            run.seed
                        ))
                    })?;
                score.push(row.score as f64);
                credit.push(row.tiebreak as f64);
                rank.push((pos + 1) as f64);
            }
            aggregates.push(SeriesAggregate {
                participant: id.clone(),
                score: Stat::of(&score).expect("runs is non-empty"),
                consumed_credit: Stat::of(&credit).expect("runs is non-empty"),
                rank: Stat::of(&rank).expect("runs is non-empty"),
            });
        }
        Ok(SeriesResult { runs, aggregates })
    }

    pub fn aggregate(&self, participant: &str) -> Option<&SeriesAggregate> {
        self.aggregates
            .iter()
            .find(|a| a.participant == participant)
    }

    pub fn participants(&self) -> Vec<&str> {
        self.aggregates
            .iter()
            .map(|a| a.participant.as_str())
            .collect()
    }
}

/// Runs `runs` matches with seeds `seed, seed + 1, ...`. `on_log` sees each
/// finished log, e.g. to persist it.
pub fn run_series(
    services: Arc<Services>,
    agents: &[AgentSource],
    runs: usize,
    options: &MatchOptions,
    mut on_log: impl FnMut(usize, &MatchLog) -> Result<(), ArenaError>,
) -> Result<SeriesResult, ArenaError> {
    if runs == 0 {
        return Err(ArenaError::NoRuns);
    }
    let mut summaries = Vec::with_capacity(runs);
    for i in 0..runs {
        let seed = options.seed.wrapping_add(i as u64);
        let endpoints = agents
            .iter()
            .map(|a| a.instantiate(seed))
            .collect::<Result<Vec<_>, _>>()?;
        let log = run_match(
            Arc::clone(&services),
            endpoints,
            &MatchOptions {
                seed,
                ..options.clone()
            },
            None,
        )?;
        on_log(i, &log)?;
        let footer = log.footer()?;
        summaries.push(RunSummary {
            seed,
            leaderboard: footer.leaderboard.clone(),
            aborted: footer.aborted,
        });
    }
    SeriesResult::from_runs(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_names_get_suffixes() {
        let names = ["greedy", "random", "greedy"].map(String::from);
        assert_eq!(participant_ids(&names), ["greedy-1", "random", "greedy-2"]);
    }

    #[test]
    fn stat_uses_the_sample_deviation() {
        let s = Stat::of(&[3.0, 5.0]).unwrap();
        assert_eq!(s.mean, 4.0);
        assert!((s.std.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(Stat::of(&[7.0]).unwrap().std, None);
        assert_eq!(Stat::of(&[2.0; 5]).unwrap().std, Some(0.0));
        assert!(Stat::of(&[]).is_none());
    }
}
