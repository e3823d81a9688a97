//! Deterministic reference policies and the `agents.json` roster.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use arena_protocol::{ActionRequest, HintParams, StateSnapshot, UsageReport};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::book::{CannedSolutionBook, ScriptedSubmission};
use crate::ArenaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    GreedyEasiest,
    TerminateNow,
    RandomWalk,
    SpeedySpendthrift,
    FrugalPerfectionist,
    CostAwareStrategist,
}

impl StrategyKind {
    pub fn is_swarm(self) -> bool {
        matches!(
            self,
            StrategyKind::SpeedySpendthrift
                | StrategyKind::FrugalPerfectionist
                | StrategyKind::CostAwareStrategist
        )
    }

    /// Worker count used when the profile does not set one.
    pub fn default_workers(self) -> usize {
        match self {
            StrategyKind::SpeedySpendthrift => 8,
            StrategyKind::CostAwareStrategist => 4,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileParameters {
    pub workers: Option<usize>,
    /// Share of the credit limit a cost-aware swarm keeps in reserve.
    pub reserve_fraction: f64,
    /// Input tokens per pairwise coordination message.
    pub comm_tokens_per_message: u64,
    pub seed: u64,
    /// Simulated duration of one swarm wave.
    pub tick_ms: u64,
    /// Buy the level-0 hint before anything else.
    pub strategy_hint: bool,
    /// Run each canned source through TEST_CODE before submitting it.
    pub test_before_submit: bool,
    /// Start over from the first canned entry instead of giving up.
    pub cycle: bool,
}

impl Default for ProfileParameters {
    fn default() -> Self {
        ProfileParameters {
            workers: None,
            reserve_fraction: 0.25,
            comm_tokens_per_message: 20_000,
            seed: 0,
            tick_ms: 60_000,
            strategy_hint: false,
            test_before_submit: false,
            cycle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    pub name: String,
    pub kind: StrategyKind,
    pub parameters: ProfileParameters,
    pub book: Arc<CannedSolutionBook>,
}

impl StrategyProfile {
    pub fn new(
        name: impl Into<String>,
        kind: StrategyKind,
        parameters: ProfileParameters,
        book: CannedSolutionBook,
    ) -> Result<Self, ArenaError> {
        let profile = StrategyProfile {
            name: name.into(),
            kind,
            parameters,
            book: Arc::new(book),
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn workers(&self) -> usize {
        self.parameters
            .workers
            .unwrap_or_else(|| self.kind.default_workers())
    }

    fn validate(&self) -> Result<(), ArenaError> {
        let p = &self.parameters;
        let bad = |msg: String| Err(ArenaError::InvalidProfile(format!("{}: {msg}", self.name)));
        if p.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&p.reserve_fraction) {
            return bad(format!(
                "reserve_fraction {} is outside [0, 1]",
                p.reserve_fraction
            ));
        }
        if self.kind == StrategyKind::FrugalPerfectionist && self.workers() != 1 {
            return bad("a frugal swarm runs exactly one worker".into());
        }
        if self.kind.is_swarm() && p.tick_ms == 0 {
            return bad("tick_ms must be positive".into());
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.parameters.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentSpec {
    kind: StrategyKind,
    #[serde(default)]
    parameters: ProfileParameters,
    #[serde(default)]
    book_path: Option<PathBuf>,
}

/// Named profiles from an `agents.json` file. Book paths are relative to
/// the file.
#[derive(Debug, Clone)]
pub struct AgentsFile {
    base: PathBuf,
    specs: BTreeMap<String, AgentSpec>,
}

impl AgentsFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArenaError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ArenaError::io(path, e))?;
        let specs = serde_json::from_str(&text).map_err(|e| ArenaError::parse(path, e))?;
        Ok(AgentsFile {
            base: path.parent().unwrap_or(Path::new(".")).to_path_buf(),
            specs,
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.specs.keys().map(String::as_str)
    }

    pub fn profile(&self, name: &str) -> Result<StrategyProfile, ArenaError> {
        let spec = self
            .specs
            .get(name)
            .ok_or_else(|| ArenaError::UnknownAgent(name.to_string()))?;
        let book = match &spec.book_path {
            Some(p) => CannedSolutionBook::load(self.base.join(p))?,
            None => CannedSolutionBook::empty(),
        };
        StrategyProfile::new(name, spec.kind, spec.parameters.clone(), book)
    }
}

/// Bookkeeping a policy carries between turns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgentState {
    next_entry: BTreeMap<String, usize>,
    viewed: BTreeSet<String>,
    tested: BTreeSet<(String, usize)>,
    hint_bought: bool,
}

/// Chooses the next action for a non-swarm profile.
pub fn step(
    profile: &StrategyProfile,
    snapshot: &StateSnapshot,
    book: &CannedSolutionBook,
    state: &mut AgentState,
) -> ActionRequest {
    match profile.kind {
        StrategyKind::GreedyEasiest => greedy(&profile.parameters, snapshot, book, state),
        StrategyKind::RandomWalk => random_walk(profile.parameters.seed, snapshot, book),
        // swarm kinds never reach a turn loop; quitting is the safe answer
        _ => ActionRequest::Terminate,
    }
}

fn submit(problem_id: &str, entry: &ScriptedSubmission) -> ActionRequest {
    ActionRequest::SubmitSolution {
        problem_id: problem_id.to_string(),
        language: entry.language.as_str().to_string(),
        source: entry.source.clone(),
    }
}

fn test(problem_id: Option<&str>, entry: &ScriptedSubmission) -> ActionRequest {
    ActionRequest::TestCode {
        language: entry.language.as_str().to_string(),
        source: entry.source.clone(),
        test_cases: vec![entry.test_input.clone().unwrap_or_else(|| "\n".to_string())],
        problem_id: problem_id.map(str::to_string),
    }
}

fn greedy(
    params: &ProfileParameters,
    snapshot: &StateSnapshot,
    book: &CannedSolutionBook,
    state: &mut AgentState,
) -> ActionRequest {
    if params.strategy_hint && !state.hint_bought {
        state.hint_bought = true;
        return ActionRequest::GetHint(HintParams {
            hint_level: 0,
            problem_id: None,
            hint_knowledge: None,
            problem_difficulty: None,
        });
    }
    let mut order: Vec<_> = snapshot
        .problems
        .iter()
        .filter(|p| {
            !snapshot.status.solved.contains(&p.problem_id)
                && !book.entries(&p.problem_id).is_empty()
        })
        .collect();
    order.sort_by(|a, b| {
        (a.points, a.level, &a.problem_id).cmp(&(b.points, b.level, &b.problem_id))
    });
    for p in order {
        let id = &p.problem_id;
        let entries = book.entries(id);
        let next = state.next_entry.get(id).copied().unwrap_or(0);
        if next >= entries.len() && !params.cycle {
            continue;
        }
        if state.viewed.insert(id.clone()) {
            return ActionRequest::ViewProblem {
                problem_id: id.clone(),
            };
        }
        let idx = next % entries.len();
        if params.test_before_submit && state.tested.insert((id.clone(), idx)) {
            return test(Some(id), &entries[idx]);
        }
        state.next_entry.insert(id.clone(), next + 1);
        return submit(id, &entries[idx]);
    }
    ActionRequest::Terminate
}

/// Uniform over action kinds, then uniform within the kind. Seeded by the
/// profile seed and the turn, so a snapshot always maps to the same move.
fn random_walk(seed: u64, snapshot: &StateSnapshot, book: &CannedSolutionBook) -> ActionRequest {
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ (snapshot.turn_index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    let visible: Vec<&str> = snapshot
        .problems
        .iter()
        .map(|p| p.problem_id.as_str())
        .collect();
    let open: Vec<&str> = visible
        .iter()
        .copied()
        .filter(|id| {
            !snapshot.status.solved.iter().any(|s| s == id) && !book.entries(id).is_empty()
        })
        .collect();
    let testable: Vec<&str> = visible
        .iter()
        .copied()
        .filter(|id| !book.entries(id).is_empty())
        .collect();

    let mut kinds = vec![0u8, 4];
    if !visible.is_empty() {
        kinds.push(1);
    }
    if !open.is_empty() {
        kinds.push(2);
    }
    if !testable.is_empty() {
        kinds.push(3);
    }
    kinds.sort_unstable();
    let pick_entry = |rng: &mut ChaCha8Rng, id: &str| {
        let entries = book.entries(id);
        entries[rng.gen_range(0..entries.len())].clone()
    };
    match *kinds.choose(&mut rng).expect("terminate is always legal") {
        0 => ActionRequest::GetHint(HintParams {
            hint_level: 0,
            problem_id: None,
            hint_knowledge: None,
            problem_difficulty: None,
        }),
        1 => ActionRequest::ViewProblem {
            problem_id: visible.choose(&mut rng).expect("non-empty").to_string(),
        },
        2 => {
            let id = *open.choose(&mut rng).expect("non-empty");
            submit(id, &pick_entry(&mut rng, id))
        }
        3 => {
            let id = *testable.choose(&mut rng).expect("non-empty");
            test(Some(id), &pick_entry(&mut rng, id))
        }
        _ => ActionRequest::Terminate,
    }
}

/// A policy bound to its book, reporting synthetic usage for every move.
#[derive(Debug, Clone)]
pub struct ScriptedAgent {
    profile: StrategyProfile,
    state: AgentState,
}

impl ScriptedAgent {
    pub fn new(profile: StrategyProfile) -> Result<Self, ArenaError> {
        if profile.kind.is_swarm() {
            return Err(ArenaError::InvalidProfile(format!(
                "{}: {:?} is a swarm profile; use simulate_swarm",
                profile.name, profile.kind
            )));
        }
        Ok(ScriptedAgent {
            profile,
            state: AgentState::default(),
        })
    }

    pub fn profile(&self) -> &StrategyProfile {
        &self.profile
    }

    /// The next action plus the usage it claims to have cost.
    pub fn step(&mut self, snapshot: &StateSnapshot) -> (ActionRequest, Option<UsageReport>) {
        let book = Arc::clone(&self.profile.book);
        let action = step(&self.profile, snapshot, &book, &mut self.state);
        let (input, output) = match &action {
            ActionRequest::SubmitSolution {
                problem_id, source, ..
            } => book
                .entries(problem_id)
                .iter()
                .find(|e| &e.source == source)
                .map(|e| e.synthetic_tokens)
                .unwrap_or(book.turn_tokens),
            _ => book.turn_tokens,
        };
        let usage = (input > 0 || output > 0).then(|| UsageReport {
            input_tokens: input,
            output_tokens: output,
            model_id: book.model_id.clone(),
            idempotency_key: Some(format!(
                "{}:{}",
                snapshot.status.name,
                snapshot.turn_index + 1
            )),
        });
        (action, usage)
    }
}
