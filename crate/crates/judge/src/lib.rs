//! Sandboxed judge: compiles submissions, runs them against hidden tests
//! under per-case limits, and reports all-or-nothing ICPC verdicts.
//!
//! Hidden cases run in manifest order and judging stops at the first
//! non-passing case, so `passed` is always the length of the passing prefix.

mod outcome;
pub mod sandbox;
mod toolchain;

use std::collections::HashMap;
use std::fs;
use std::sync::{Arc, Condvar, Mutex};

use arena_core::{outputs_match, JudgeSettings, LanguageId, Problem, Verdict};
use sha2::{Digest, Sha256};
use tempfile::TempDir;
use thiserror::Error;

pub use outcome::{
    classify, CaseOutcome, CaseReport, CustomTestReport, ExitKind, JudgeResult, Judgement,
    RunOutcome,
};
pub use sandbox::{Sandbox, SandboxError, SandboxMode};
pub use toolchain::Toolchain;

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error("no toolchain configured for {0}")]
    ToolchainMissing(LanguageId),
    #[error(transparent)]
    Sandbox(#[from] SandboxError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("a test request needs at least one case")]
    NoCases,
    #[error("{given} cases requested, at most {max} allowed")]
    TooManyCases { given: usize, max: usize },
}

/// Limits for running one case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunLimits {
    pub time_limit_ms: u64,
    pub memory_limit_mib: u64,
    pub output_cap_bytes: usize,
}

impl RunLimits {
    pub fn for_problem(problem: &Problem, settings: &JudgeSettings) -> Self {
        RunLimits {
            time_limit_ms: problem.time_limit_ms,
            memory_limit_mib: problem.memory_limit_mib,
            output_cap_bytes: settings.output_cap_bytes,
        }
    }

    pub fn defaults(settings: &JudgeSettings) -> Self {
        RunLimits {
            time_limit_ms: settings.default_time_limit_ms,
            memory_limit_mib: settings.default_memory_limit_mib,
            output_cap_bytes: settings.output_cap_bytes,
        }
    }
}

/// A compiled (or, for interpreted languages, staged) submission.
#[derive(Debug, Clone)]
pub struct Artifact {
    language: LanguageId,
    dir: Arc<TempDir>,
}

impl Artifact {
    pub fn language(&self) -> LanguageId {
        self.language
    }
}

#[derive(Debug, Clone)]
pub enum CompileOutcome {
    Ready(Artifact),
    /// The submission does not compile; its verdict is CE.
    Failed {
        diagnostics: String,
    },
}

/// Hex SHA-256 of a submission's source text.
pub fn source_hash(source: &[u8]) -> String {
    hex::encode(Sha256::digest(source))
}

type CacheKey = (String, LanguageId, String, bool);

pub struct Judge {
    sandbox: Sandbox,
    toolchain: Toolchain,
    cache: Option<Mutex<HashMap<CacheKey, Judgement>>>,
    slots: (Mutex<usize>, Condvar),
}

impl Judge {
    /// `max_parallel` bounds concurrently running sandboxed processes.
    pub fn new(sandbox: Sandbox, toolchain: Toolchain, max_parallel: usize) -> Self {
        Judge {
            sandbox,
            toolchain,
            cache: None,
            slots: (Mutex::new(max_parallel.max(1)), Condvar::new()),
        }
    }

    /// Host sandbox and toolchains, auto-detected.
    pub fn detect() -> Self {
        let workers = std::thread::available_parallelism().map_or(2, |n| n.get());
        Judge::new(Sandbox::detect(), Toolchain::detect(), workers)
    }

    /// Memoizes [`Judge::judge_submission`] by problem checksum, language and
    /// source hash. Judging is deterministic, so this only saves work.
    pub fn with_cache(mut self) -> Self {
        self.cache = Some(Mutex::new(HashMap::new()));
        self
    }

    pub fn sandbox_mode(&self) -> SandboxMode {
        self.sandbox.mode()
    }

    pub fn toolchain(&self) -> &Toolchain {
        &self.toolchain
    }

    pub fn compile(
        &self,
        source: &[u8],
        language: LanguageId,
    ) -> Result<CompileOutcome, JudgeError> {
        let plan = self
            .toolchain
            .plan(language)
            .ok_or(JudgeError::ToolchainMissing(language))?;
        let cell = self.sandbox.cell()?;
        cell.write_file(plan.source_file(), source)?;
        cell.hand_over()?;

        if let Some(argv) = plan.compile_argv(&cell) {
            let run = self.with_slot(|| {
                self.sandbox
                    .run(&cell, &argv, b"", &toolchain::compile_limits())
            })?;
            if !run.status.success() {
                let mut diagnostics = String::from_utf8_lossy(&run.stderr).into_owned();
                if run.wall_killed {
                    diagnostics.push_str("\ncompilation timed out");
                }
                return Ok(CompileOutcome::Failed { diagnostics });
            }
        }

        let dir = tempfile::Builder::new()
            .prefix("arena-artifact-")
            .tempdir()?;
        for entry in fs::read_dir(cell.work_dir())? {
            let entry = entry?;
            if entry.file_type()?.is_file() {
                fs::copy(entry.path(), dir.path().join(entry.file_name()))?;
            }
        }
        Ok(CompileOutcome::Ready(Artifact {
            language,
            dir: Arc::new(dir),
        }))
    }

    /// Runs one input in a fresh cell. A failed sandbox setup is retried once.
    pub fn run_case(
        &self,
        artifact: &Artifact,
        input: &[u8],
        limits: &RunLimits,
    ) -> Result<RunOutcome, JudgeError> {
        match self.run_case_once(artifact, input, limits) {
            Err(JudgeError::Sandbox(SandboxError::Setup(reason))) => {
                log::warn!("sandbox setup failed ({reason}); retrying once");
                self.run_case_once(artifact, input, limits)
            }
            other => other,
        }
    }

    fn run_case_once(
        &self,
        artifact: &Artifact,
        input: &[u8],
        limits: &RunLimits,
    ) -> Result<RunOutcome, JudgeError> {
        let plan = self
            .toolchain
            .plan(artifact.language)
            .ok_or(JudgeError::ToolchainMissing(artifact.language))?;
        let cell = self.sandbox.cell()?;
        cell.populate_from(artifact.dir.path())?;
        cell.hand_over()?;
        let argv = plan.run_argv(&cell, limits);
        let proc_limits = toolchain::run_limits(artifact.language, limits);
        let raw = self.with_slot(|| self.sandbox.run(&cell, &argv, input, &proc_limits))?;
        Ok(RunOutcome::from_raw(raw, limits))
    }

    /// Judges a submission on the problem's hidden tests.
    pub fn judge_submission(
        &self,
        problem: &Problem,
        source: &[u8],
        language: LanguageId,
        settings: &JudgeSettings,
    ) -> Result<Judgement, JudgeError> {
        let key = (
            problem.checksum(),
            language,
            source_hash(source),
            settings.run_all_cases,
        );
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.lock().expect("judge cache poisoned").get(&key) {
                return Ok(hit.clone());
            }
        }
        let judgement = self.judge_uncached(problem, source, language, settings)?;
        if let Some(cache) = &self.cache {
            cache
                .lock()
                .expect("judge cache poisoned")
                .insert(key, judgement.clone());
        }
        Ok(judgement)
    }

    fn judge_uncached(
        &self,
        problem: &Problem,
        source: &[u8],
        language: LanguageId,
        settings: &JudgeSettings,
    ) -> Result<Judgement, JudgeError> {
        let total = problem.hidden_tests.len();
        let artifact = match self.compile(source, language)? {
            CompileOutcome::Ready(artifact) => artifact,
            CompileOutcome::Failed { diagnostics } => {
                return Ok(Judgement {
                    result: JudgeResult {
                        verdict: Verdict::CE,
                        passed: 0,
                        total,
                        per_case: Vec::new(),
                    },
                    diagnostics: Some(diagnostics),
                });
            }
        };

        let limits = RunLimits::for_problem(problem, settings);
        let mut per_case = Vec::with_capacity(total);
        let mut first_failure: Option<(usize, Verdict)> = None;
        for (index, case) in problem.hidden_tests.iter().enumerate() {
            let outcome = self.run_case(&artifact, &case.input, &limits)?;
            let verdict = outcome.case_verdict(&case.expected_output);
            per_case.push(CaseReport {
                case_index: index,
                outcome: CaseOutcome::new(verdict, &outcome),
            });
            if verdict != Verdict::AC && first_failure.is_none() {
                first_failure = Some((index, verdict));
                if !settings.run_all_cases {
                    break;
                }
            }
        }
        let (verdict, passed) = match first_failure {
            None => (Verdict::AC, total),
            Some((index, verdict)) => (verdict, index),
        };
        Ok(Judgement {
            result: JudgeResult {
                verdict,
                passed,
                total,
                per_case,
            },
            diagnostics: None,
        })
    }

    /// Runs the participant's own inputs and returns raw outcomes. No
    /// expected outputs are involved and no hidden data is touched.
    pub fn run_custom_tests(
        &self,
        source: &[u8],
        language: LanguageId,
        inputs: &[Vec<u8>],
        limits: &RunLimits,
        max_cases: usize,
    ) -> Result<CustomTestReport, JudgeError> {
        if inputs.is_empty() {
            return Err(JudgeError::NoCases);
        }
        if inputs.len() > max_cases {
            return Err(JudgeError::TooManyCases {
                given: inputs.len(),
                max: max_cases,
            });
        }
        let artifact = match self.compile(source, language)? {
            CompileOutcome::Ready(artifact) => artifact,
            CompileOutcome::Failed { diagnostics } => {
                return Ok(CustomTestReport {
                    compile_error: Some(diagnostics),
                    outcomes: Vec::new(),
                });
            }
        };
        let outcomes = inputs
            .iter()
            .map(|input| self.run_case(&artifact, input, limits))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CustomTestReport {
            compile_error: None,
            outcomes,
        })
    }

    fn with_slot<T>(&self, f: impl FnOnce() -> T) -> T {
        let (lock, cvar) = &self.slots;
        {
            let mut free = lock.lock().expect("judge slots poisoned");
            while *free == 0 {
                free = cvar.wait(free).expect("judge slots poisoned");
            }
            *free -= 1;
        }
        let out = f();
        *lock.lock().expect("judge slots poisoned") += 1;
        cvar.notify_one();
        out
    }
}

impl RunOutcome {
    /// Verdict of this run against an expected output.
    pub fn case_verdict(&self, expected: &[u8]) -> Verdict {
        match self.exit {
            ExitKind::Timeout => Verdict::TLE,
            ExitKind::MemoryExceeded => Verdict::MLE,
            ExitKind::Crashed => Verdict::RE,
            ExitKind::Ok if !self.stdout_truncated && outputs_match(&self.stdout, expected) => {
                Verdict::AC
            }
            ExitKind::Ok => Verdict::WA,
        }
    }
}
