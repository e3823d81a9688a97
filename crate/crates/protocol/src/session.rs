use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use arena_core::{
    rank, Contest, Credits, DifficultyLevel, LanguageId, LeaderboardRow, ParticipantState,
    ParticipantStatus, PriceTable, ScoreTable, Stamp, SubmissionRecord, TokenUsage, Verdict,
};
use arena_hints::{HintError, HintLibrary, HintRequest, HintResponse};
use arena_judge::{source_hash, CustomTestReport, Judge, JudgeError, Judgement, RunLimits};
use serde::{Deserialize, Serialize};

use crate::action::{parse_action, parse_language, ActionKind, ActionRequest};
use crate::error::{ErrorCode, ProtocolError};
use crate::snapshot::{render_state, StateSnapshot};

/// Everything a session dispatches to. Shared read-only across sessions.
pub struct Services {
    pub contest: Contest,
    pub judge: Arc<Judge>,
    pub hints: Option<Arc<HintLibrary>>,
    pub prices: PriceTable,
}

impl Services {
    pub fn new(
        contest: Contest,
        judge: impl Into<Arc<Judge>>,
        hints: Option<HintLibrary>,
        prices: PriceTable,
    ) -> Self {
        Services {
            contest,
            judge: judge.into(),
            hints: hints.map(Arc::new),
            prices,
        }
    }

    /// Same judge, hints and prices for another contest or configuration.
    pub fn with_contest(&self, contest: Contest) -> Self {
        Services {
            contest,
            judge: Arc::clone(&self.judge),
            hints: self.hints.clone(),
            prices: self.prices.clone(),
        }
    }

    pub fn languages(&self) -> Vec<LanguageId> {
        LanguageId::ALL
            .into_iter()
            .filter(|l| self.judge.toolchain().supports(*l))
            .collect()
    }
}

/// Committed participant states visible to every session in a match.
#[derive(Debug, Default)]
pub struct Standings {
    inner: Mutex<BTreeMap<String, ParticipantState>>,
}

impl Standings {
    pub fn publish(&self, participant: &ParticipantState) {
        self.inner
            .lock()
            .expect("standings poisoned")
            .insert(participant.id.clone(), participant.clone());
    }

    pub fn rows(&self, table: &ScoreTable) -> Vec<LeaderboardRow> {
        let inner = self.inner.lock().expect("standings poisoned");
        rank(inner.values(), table)
    }

    pub fn participants(&self) -> Vec<ParticipantState> {
        self.inner
            .lock()
            .expect("standings poisoned")
            .values()
            .cloned()
            .collect()
    }
}

/// Source of session time. Simulated time advances a fixed amount per turn
/// and manual time is advanced by the caller; both keep scripted runs
/// reproducible.
#[derive(Debug, Clone)]
pub enum Clock {
    Real(Instant),
    Simulated { ms_per_turn: u64 },
    Manual(ManualClock),
}

impl Clock {
    pub fn real() -> Self {
        Clock::Real(Instant::now())
    }
}

/// Shared millisecond counter.
#[derive(Debug, Clone, Default)]
pub struct ManualClock(Arc<AtomicU64>);

impl ManualClock {
    pub fn advance(&self, ms: u64) {
        self.0.fetch_add(ms, Ordering::SeqCst);
    }

    pub fn now_ms(&self) -> u64 {
        self.0.load(Ordering::SeqCst)
    }
}

/// Token usage for one model call, charged as inference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageReport {
    pub input_tokens: u64,
    pub output_tokens: u64,
    pub model_id: String,
    /// Retransmissions with the same key are charged once.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotency_key: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageAck {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotency_key: Option<String>,
    pub charged: Credits,
    pub duplicate: bool,
    pub consumed_credit: Credits,
    pub status: ParticipantStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Problem {
        problem_id: String,
        level: DifficultyLevel,
        statement: String,
        time_limit_ms: u64,
        memory_limit_mib: u64,
    },
    Hint(HintResponse),
    Judgement(Judgement),
    CustomTests(CustomTestReport),
    Withdrawn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionResult {
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Payload>,
    /// Sum of the ledger entries this turn wrote.
    pub charged: Credits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ProtocolError>,
    /// Set when the participant was terminated during this turn.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    pub status: ParticipantStatus,
    /// Turn number this result belongs to, starting at 1.
    pub turn_index: u64,
}

struct Outcome {
    ok: bool,
    payload: Option<Payload>,
    error: Option<ProtocolError>,
}

impl Outcome {
    fn ok(payload: Payload) -> Self {
        Outcome {
            ok: true,
            payload: Some(payload),
            error: None,
        }
    }

    fn fail(code: ErrorCode, message: impl Into<String>) -> Self {
        Outcome {
            ok: false,
            payload: None,
            error: Some(ProtocolError::new(code, message)),
        }
    }
}

impl From<ProtocolError> for Outcome {
    fn from(e: ProtocolError) -> Self {
        Outcome {
            ok: false,
            payload: None,
            error: Some(e),
        }
    }
}

/// One participant's strictly sequential turn loop.
pub struct Session {
    services: Arc<Services>,
    participant: ParticipantState,
    visible: Vec<String>,
    turns: u64,
    clock: Clock,
    usage_seen: HashMap<String, UsageAck>,
    standings: Option<Arc<Standings>>,
}

impl Session {
    pub fn new(services: Arc<Services>, id: impl Into<String>, clock: Clock) -> Self {
        let visible = services.contest.problem_ids().map(str::to_string).collect();
        Session {
            services,
            participant: ParticipantState::new(id),
            visible,
            turns: 0,
            clock,
            usage_seen: HashMap::new(),
            standings: None,
        }
    }

    /// Hides every problem not in `ids`.
    pub fn restrict_to(mut self, ids: &[String]) -> Self {
        self.visible.retain(|p| ids.contains(p));
        self
    }

    pub fn with_standings(mut self, standings: Arc<Standings>) -> Self {
        standings.publish(&self.participant);
        self.standings = Some(standings);
        self
    }

    pub fn participant(&self) -> &ParticipantState {
        &self.participant
    }

    pub fn services(&self) -> &Arc<Services> {
        &self.services
    }

    pub fn turn_index(&self) -> u64 {
        self.turns
    }

    pub fn is_active(&self) -> bool {
        self.participant.is_active()
    }

    fn now_ms(&self) -> u64 {
        match &self.clock {
            Clock::Real(start) => start.elapsed().as_millis() as u64,
            Clock::Simulated { ms_per_turn } => self.turns * ms_per_turn,
            Clock::Manual(clock) => clock.now_ms(),
        }
    }

    fn stamp(&self) -> Stamp {
        Stamp::new(self.turns + 1, self.now_ms())
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let contest = &self.services.contest;
        let table = ScoreTable::for_contest(contest);
        let rankings = match &self.standings {
            Some(s) => s.rows(&table),
            None => rank([&self.participant], &table),
        };
        render_state(
            &self.participant,
            contest,
            &self.visible,
            rankings,
            self.services.languages(),
            self.turns,
        )
    }

    /// Charges a usage report outside any action. Duplicate idempotency
    /// keys return the original acknowledgement without a new entry.
    pub fn report_usage(&mut self, report: &UsageReport) -> Result<UsageAck, ProtocolError> {
        if let Some(ack) = report
            .idempotency_key
            .as_ref()
            .and_then(|k| self.usage_seen.get(k))
        {
            return Ok(UsageAck {
                duplicate: true,
                ..ack.clone()
            });
        }
        if !self.participant.is_active() {
            return Err(ProtocolError::new(
                ErrorCode::NotActive,
                "participant is no longer active",
            ));
        }
        let price = self
            .services
            .prices
            .price(&report.model_id)
            .map_err(|e| ProtocolError::new(ErrorCode::UnknownModel, e.to_string()))?;
        let at = self.stamp();
        let charged = self.participant.ledger.charge_inference(
            TokenUsage::new(report.input_tokens, report.output_tokens),
            price,
            at,
        );
        self.check_termination();
        self.publish();
        let ack = UsageAck {
            idempotency_key: report.idempotency_key.clone(),
            charged,
            duplicate: false,
            consumed_credit: self.participant.ledger.consumed_total(),
            status: self.participant.status,
        };
        if let Some(key) = &report.idempotency_key {
            self.usage_seen.insert(key.clone(), ack.clone());
        }
        Ok(ack)
    }

    /// Parses and applies a raw wire message. A message that does not parse
    /// still consumes the turn and pays its inference, but no penalty.
    pub fn apply_raw(&mut self, raw: &[u8], usage: Option<&UsageReport>) -> ActionResult {
        match parse_action(raw) {
            Ok(request) => self.apply_action(&request, usage),
            Err(e) => self.turn(None, usage, |_| e.into()),
        }
    }

    pub fn apply_action(
        &mut self,
        request: &ActionRequest,
        usage: Option<&UsageReport>,
    ) -> ActionResult {
        self.turn(Some(request.kind()), usage, |s| s.dispatch(request))
    }

    /// Ends an active participant from outside the turn loop, as a match
    /// does when a participant hits its turn guard.
    pub fn force_terminate(&mut self) -> bool {
        let ended = self.participant.terminate().is_ok();
        self.publish();
        ended
    }

    /// The agent did not answer in time: the turn passes and time still
    /// accrues.
    pub fn skip_turn(&mut self) -> ActionResult {
        self.turn(None, None, |_| {
            Outcome::fail(
                ErrorCode::TurnTimeout,
                "no action received within the turn timeout",
            )
        })
    }

    fn turn(
        &mut self,
        action: Option<ActionKind>,
        usage: Option<&UsageReport>,
        body: impl FnOnce(&mut Self) -> Outcome,
    ) -> ActionResult {
        if !self.participant.is_active() {
            return ActionResult {
                ok: false,
                action,
                payload: None,
                charged: 0,
                error: Some(ProtocolError::new(
                    ErrorCode::NotActive,
                    "participant is no longer active",
                )),
                notice: None,
                status: self.participant.status,
                turn_index: self.turns,
            };
        }
        let start = self.participant.ledger.len();
        let outcome = match usage.map(|u| self.report_usage(u)) {
            Some(Err(e)) => e.into(),
            _ if !self.participant.is_active() => Outcome::fail(
                ErrorCode::BudgetExhausted,
                "credit limit reached before the action ran",
            ),
            _ => body(self),
        };
        self.turns += 1;
        let elapsed = self.now_ms() as f64 / 1000.0;
        let at = Stamp::new(self.turns, self.now_ms());
        let services = Arc::clone(&self.services);
        let config = &services.contest.config;
        self.participant.ledger.accrue_time(elapsed, config, at);
        self.check_termination();
        let charged = self
            .participant
            .ledger
            .entries_since(start)
            .iter()
            .map(|e| e.amount)
            .sum();
        let notice = (self.participant.status == ParticipantStatus::Terminated).then(|| {
            format!(
                "credit limit of {} reached; participation has ended",
                config.credit_limit
            )
        });
        self.publish();
        ActionResult {
            ok: outcome.ok,
            action,
            payload: outcome.payload,
            charged,
            error: outcome.error,
            notice,
            status: self.participant.status,
            turn_index: self.turns,
        }
    }

    /// Moves an active participant over the limit to Terminated.
    fn check_termination(&mut self) -> bool {
        if self.participant.is_active()
            && self
                .participant
                .ledger
                .is_terminated(&self.services.contest.config)
        {
            let _ = self.participant.terminate();
            return true;
        }
        false
    }

    fn publish(&self) {
        if let Some(s) = &self.standings {
            s.publish(&self.participant);
        }
    }

    fn visible_problem(&self, id: &str) -> Result<&arena_core::Problem, ProtocolError> {
        self.visible
            .iter()
            .any(|p| p == id)
            .then(|| self.services.contest.problem(id))
            .flatten()
            .ok_or_else(|| {
                ProtocolError::new(ErrorCode::UnknownProblem, format!("unknown problem `{id}`"))
            })
    }

    fn language(&self, name: &str) -> Result<LanguageId, ProtocolError> {
        parse_language(name)
            .filter(|l| self.services.judge.toolchain().supports(*l))
            .ok_or_else(|| {
                ProtocolError::new(
                    ErrorCode::UnsupportedLanguage,
                    format!("language `{name}` is not available"),
                )
            })
    }

    fn dispatch(&mut self, request: &ActionRequest) -> Outcome {
        let result = match request {
            ActionRequest::ViewProblem { problem_id } => self.view(problem_id),
            ActionRequest::GetHint(params) => self.hint(&HintRequest::from(params)),
            ActionRequest::SubmitSolution {
                problem_id,
                language,
                source,
            } => self.submit(problem_id, language, source),
            ActionRequest::TestCode {
                language,
                source,
                test_cases,
                problem_id,
            } => self.test(language, source, test_cases, problem_id.as_deref()),
            ActionRequest::Terminate => {
                let _ = self.participant.withdraw();
                Ok(Outcome::ok(Payload::Withdrawn))
            }
        };
        result.unwrap_or_else(Outcome::from)
    }

    fn view(&self, problem_id: &str) -> Result<Outcome, ProtocolError> {
        let p = self.visible_problem(problem_id)?;
        Ok(Outcome::ok(Payload::Problem {
            problem_id: p.id.clone(),
            level: p.level,
            statement: p.statement_with_samples(),
            time_limit_ms: p.time_limit_ms,
            memory_limit_mib: p.memory_limit_mib,
        }))
    }

    fn hint(&mut self, request: &HintRequest) -> Result<Outcome, ProtocolError> {
        if let Some(id) = &request.problem_id {
            if matches!(request.level, 1 | 3) {
                self.visible_problem(id)?;
            }
        }
        let services = Arc::clone(&self.services);
        let library = services.hints.as_ref().ok_or_else(|| {
            ProtocolError::new(ErrorCode::Internal, "no hint corpus is configured")
        })?;
        let at = self.stamp();
        match library.get_hint(request, &services.contest, &mut self.participant.ledger, at) {
            Ok(response) => {
                if self.check_termination() {
                    return Ok(Outcome::fail(
                        ErrorCode::BudgetExhausted,
                        "the hint charge reached the credit limit",
                    ));
                }
                Ok(Outcome::ok(Payload::Hint(response)))
            }
            Err(e) => {
                self.check_termination();
                let code = match e {
                    HintError::MissingParameter { .. } => ErrorCode::MissingParameter,
                    HintError::UnknownProblem(_) => ErrorCode::UnknownProblem,
                    HintError::LevelOutOfRange(_) => ErrorCode::InvalidParameter,
                    HintError::NoMatch { .. } => ErrorCode::NoHintMatch,
                    _ => ErrorCode::Internal,
                };
                Err(ProtocolError::new(code, e.to_string()))
            }
        }
    }

    fn submit(
        &mut self,
        problem_id: &str,
        language: &str,
        source: &str,
    ) -> Result<Outcome, ProtocolError> {
        let services = Arc::clone(&self.services);
        let problem = self.visible_problem(problem_id)?;
        let lang = self.language(language)?;
        if self.participant.solved.contains(problem_id) {
            return Err(ProtocolError::new(
                ErrorCode::AlreadySolved,
                format!("`{problem_id}` is already solved"),
            ));
        }
        let settings = &services.contest.config.judge;
        let judgement = services
            .judge
            .judge_submission(problem, source.as_bytes(), lang, settings)
            .map_err(judge_error)?;
        let verdict = judgement.result.verdict;
        let at = self.stamp();
        self.participant.record_submission(SubmissionRecord {
            problem_id: problem_id.to_string(),
            turn_index: at.turn,
            verdict,
            passed: judgement.result.passed,
            total: judgement.result.total,
            language_id: lang,
            source_hash: source_hash(source.as_bytes()),
        });
        if verdict != Verdict::AC {
            self.participant
                .ledger
                .add_penalty(verdict, &services.contest.config, at)
                .map_err(|e| ProtocolError::new(ErrorCode::Internal, e.to_string()))?;
        }
        Ok(Outcome {
            ok: verdict == Verdict::AC,
            payload: Some(Payload::Judgement(judgement)),
            error: None,
        })
    }

    fn test(
        &mut self,
        language: &str,
        source: &str,
        cases: &[String],
        problem_id: Option<&str>,
    ) -> Result<Outcome, ProtocolError> {
        let services = Arc::clone(&self.services);
        let settings = &services.contest.config.judge;
        let limits = match problem_id {
            Some(id) => RunLimits::for_problem(self.visible_problem(id)?, settings),
            None => RunLimits::defaults(settings),
        };
        let lang = self.language(language)?;
        if cases.len() > settings.max_custom_cases {
            return Err(ProtocolError::new(
                ErrorCode::InvalidParameter,
                format!(
                    "{} test cases given, at most {} allowed",
                    cases.len(),
                    settings.max_custom_cases
                ),
            ));
        }
        let at = self.stamp();
        self.participant
            .ledger
            .charge_test(cases.len(), &services.contest.config, at);
        if self.check_termination() {
            return Ok(Outcome::fail(
                ErrorCode::BudgetExhausted,
                "the test charge reached the credit limit",
            ));
        }
        let inputs: Vec<Vec<u8>> = cases.iter().map(|c| c.as_bytes().to_vec()).collect();
        let report = services
            .judge
            .run_custom_tests(
                source.as_bytes(),
                lang,
                &inputs,
                &limits,
                settings.max_custom_cases,
            )
            .map_err(judge_error)?;
        Ok(Outcome::ok(Payload::CustomTests(report)))
    }
}

fn judge_error(e: JudgeError) -> ProtocolError {
    match e {
        JudgeError::ToolchainMissing(l) => ProtocolError::new(
            ErrorCode::UnsupportedLanguage,
            format!("no toolchain for {l}"),
        ),
        JudgeError::NoCases | JudgeError::TooManyCases { .. } => {
            ProtocolError::new(ErrorCode::InvalidParameter, e.to_string())
        }
        other => ProtocolError::new(ErrorCode::Internal, other.to_string()),
    }
}
