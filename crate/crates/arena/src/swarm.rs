//! Swarm-policy simulation.
//!
//! A swarm is one participant whose workers attack several problems at once.
//! Each wave, up to `workers` problems are in flight, each worker submitting
//! the next canned entry for its problem; a worker keeps its problem across
//! waves until it is accepted or its entries run out. Every parallel wave
//! pays `comm_tokens_per_message * workers * (workers - 1) / 2` input tokens
//! of coordination overhead. A wave advances the simulated clock by one tick
//! however wide it is.

use std::collections::VecDeque;
use std::io::Write;
use std::sync::Arc;

use arena_core::{ScoreTable, Verdict};
use arena_protocol::{ActionRequest, Clock, ManualClock, Payload, Services, Session, UsageReport};

use crate::agents::{StrategyKind, StrategyProfile};
use crate::log::{
    LogHeader, MatchLog, ParticipantInfo, ResultSummary, RunMode, StatusAfter, TurnEvent,
    TurnRecord, WaveInfo, WaveMode,
};
use crate::orchestrator::{footer_for, problem_entries, Recorder};
use crate::ArenaError;

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmOptions {
    pub seed: u64,
    pub wall_clock: bool,
}

impl Default for SwarmOptions {
    fn default() -> Self {
        SwarmOptions {
            seed: 0,
            wall_clock: true,
        }
    }
}

/// Pairwise coordination tokens for one wave.
pub fn comm_tokens_per_wave(comm_tokens_per_message: u64, workers: usize) -> u64 {
    let w = workers as u64;
    comm_tokens_per_message * w * w.saturating_sub(1) / 2
}

struct Slot {
    problem: String,
    next: usize,
}

pub fn simulate_swarm(
    profile: &StrategyProfile,
    services: Arc<Services>,
    options: &SwarmOptions,
    sink: Option<&mut dyn Write>,
) -> Result<MatchLog, ArenaError> {
    if !profile.kind.is_swarm() {
        return Err(ArenaError::InvalidProfile(format!(
            "{}: {:?} is not a swarm profile",
            profile.name, profile.kind
        )));
    }
    let params = &profile.parameters;
    let book = Arc::clone(&profile.book);
    let workers = profile.workers();
    let config = services.contest.config.clone();
    let table = ScoreTable::for_contest(&services.contest);
    let clock = ManualClock::default();
    let mut session = Session::new(
        Arc::clone(&services),
        profile.name.clone(),
        Clock::Manual(clock.clone()),
    );

    let problems = problem_entries(&services);
    let mut order: Vec<_> = problems
        .iter()
        .filter(|p| !book.entries(&p.problem_id).is_empty())
        .collect();
    order.sort_by(|a, b| {
        (a.points, a.level, &a.problem_id).cmp(&(b.points, b.level, &b.problem_id))
    });
    let mut queue: VecDeque<Slot> = order
        .iter()
        .map(|p| Slot {
            problem: p.problem_id.clone(),
            next: 0,
        })
        .collect();
    let mut running: Vec<Slot> = Vec::new();

    let header = LogHeader {
        mode: RunMode::Swarm,
        contest_id: services.contest.id.clone(),
        config: config.clone(),
        seed: options.seed,
        participants: vec![ParticipantInfo {
            id: profile.name.clone(),
            agent: format!("swarm:{}", profile.name),
            kind: Some(profile.kind),
        }],
        problems,
        started_at: None,
    };
    let mut recorder = Recorder::start(header, options.wall_clock, sink)?;
    let id = profile.name.clone();
    let record = |session: &Session,
                  before: usize,
                  event: TurnEvent,
                  result: ResultSummary,
                  wave: WaveInfo| TurnRecord {
        participant: id.clone(),
        turn_index: session.turn_index(),
        event,
        result,
        ledger_delta: session.participant().ledger.entries_since(before).to_vec(),
        status_after: StatusAfter::of(session.participant(), &table),
        wave: Some(wave),
        wall_ms: None,
    };

    let mut sequential = workers == 1;
    let threshold = (1.0 - params.reserve_fraction) * config.credit_limit as f64;
    let mut wave_index = 0u64;
    while session.is_active() && !(queue.is_empty() && running.is_empty()) {
        if profile.kind == StrategyKind::CostAwareStrategist
            && !sequential
            && session.participant().ledger.termination_total() as f64 > threshold
        {
            sequential = true;
            // unfinished problems go back to the front, in order
            for slot in running.drain(..).rev() {
                queue.push_front(slot);
            }
        }
        let width = if sequential { 1 } else { workers };
        while running.len() < width {
            match queue.pop_front() {
                Some(slot) => running.push(slot),
                None => break,
            }
        }
        wave_index += 1;
        clock.advance(params.tick_ms);
        let wave = WaveInfo {
            index: wave_index,
            width,
            mode: if sequential {
                WaveMode::Sequential
            } else {
                WaveMode::Parallel
            },
        };

        let overhead = if sequential {
            0
        } else {
            comm_tokens_per_wave(params.comm_tokens_per_message, width)
        };
        if overhead > 0 {
            let report = UsageReport {
                input_tokens: overhead,
                output_tokens: 0,
                model_id: book.model_id.clone(),
                idempotency_key: Some(format!("{id}:wave-{wave_index}:overhead")),
            };
            let before = session.participant().ledger.len();
            let ack = session.report_usage(&report);
            let rec = record(
                &session,
                before,
                TurnEvent::Usage {
                    report,
                    overhead: true,
                },
                ResultSummary::of_ack(&ack),
                wave,
            );
            recorder.push(rec)?;
        }

        let mut still_running = Vec::with_capacity(running.len());
        for mut slot in running.drain(..) {
            if !session.is_active() {
                break;
            }
            let entries = book.entries(&slot.problem);
            let entry = &entries[slot.next];
            let request = ActionRequest::SubmitSolution {
                problem_id: slot.problem.clone(),
                language: entry.language.as_str().to_string(),
                source: entry.source.clone(),
            };
            let usage = UsageReport {
                input_tokens: entry.synthetic_tokens.0,
                output_tokens: entry.synthetic_tokens.1,
                model_id: book.model_id.clone(),
                idempotency_key: Some(format!(
                    "{id}:wave-{wave_index}:{}:{}",
                    slot.problem, slot.next
                )),
            };
            let before = session.participant().ledger.len();
            let result = session.apply_action(&request, Some(&usage));
            let accepted = matches!(&result.payload, Some(Payload::Judgement(j)) if j.result.verdict == Verdict::AC);
            let event = TurnEvent::Action {
                request: Some(request),
                raw: None,
                usage: Some(usage),
            };
            recorder.push(record(
                &session,
                before,
                event,
                ResultSummary::of_result(&result),
                wave,
            ))?;
            slot.next += 1;
            if !accepted && slot.next < entries.len() {
                still_running.push(slot);
            }
        }
        running = still_running;
    }
    let log = recorder.finish(footer_for(&[&session], &table, Some(wave_index), None))?;
    Ok(log)
}
