use arena_core::Verdict;
use serde::{Deserialize, Serialize};

use crate::sandbox::RawRun;
use crate::RunLimits;

const ALLOCATION_FAILURE_MARKERS: [&str; 4] = [
    "std::bad_alloc",
    "MemoryError",
    "java.lang.OutOfMemoryError",
    "Cannot allocate memory",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitKind {
    Ok,
    Timeout,
    MemoryExceeded,
    Crashed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub exit: ExitKind,
    #[serde(with = "lossy_text")]
    pub stdout: Vec<u8>,
    pub stdout_truncated: bool,
    #[serde(with = "lossy_text")]
    pub stderr: Vec<u8>,
    pub cpu_ms: u64,
    pub wall_ms: u64,
    pub peak_mem_mib: u64,
    pub exit_code: Option<i32>,
    pub signal: Option<i32>,
}

impl RunOutcome {
    pub fn from_raw(raw: RawRun, limits: &RunLimits) -> Self {
        RunOutcome {
            exit: classify(&raw, limits),
            exit_code: raw.status.code(),
            signal: raw.signal(),
            stdout_truncated: raw.stdout_truncated,
            cpu_ms: raw.cpu_ms,
            wall_ms: raw.wall_ms,
            peak_mem_mib: raw.peak_rss_kib.div_ceil(1024),
            stdout: raw.stdout,
            stderr: raw.stderr,
        }
    }
}

/// Maps a finished process onto an exit class.
///
/// CPU time over the limit (or the wall-clock watchdog firing) is a timeout.
/// Peak RSS over the limit, or an abnormal exit whose stderr reports an
/// allocation failure, is a memory overrun. Any other abnormal exit is a
/// crash.
pub fn classify(raw: &RawRun, limits: &RunLimits) -> ExitKind {
    if raw.wall_killed || raw.cpu_ms > limits.time_limit_ms || raw.signal() == Some(libc::SIGXCPU) {
        return ExitKind::Timeout;
    }
    let over_memory = raw.peak_rss_kib > limits.memory_limit_mib * 1024;
    if raw.status.success() {
        return if over_memory {
            ExitKind::MemoryExceeded
        } else {
            ExitKind::Ok
        };
    }
    let stderr = String::from_utf8_lossy(&raw.stderr);
    if over_memory
        || ALLOCATION_FAILURE_MARKERS
            .iter()
            .any(|m| stderr.contains(m))
    {
        ExitKind::MemoryExceeded
    } else {
        ExitKind::Crashed
    }
}

/// Per-case summary reported back to the submitter. Carries no program
/// output so hidden inputs cannot be echoed back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub verdict: Verdict,
    pub exit: ExitKind,
    pub cpu_ms: u64,
    pub wall_ms: u64,
    pub peak_mem_mib: u64,
}

impl CaseOutcome {
    pub fn new(verdict: Verdict, run: &RunOutcome) -> Self {
        CaseOutcome {
            verdict,
            exit: run.exit,
            cpu_ms: run.cpu_ms,
            wall_ms: run.wall_ms,
            peak_mem_mib: run.peak_mem_mib,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_index: usize,
    pub outcome: CaseOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgeResult {
    pub verdict: Verdict,
    /// Length of the passing prefix of hidden cases.
    pub passed: usize,
    pub total: usize,
    pub per_case: Vec<CaseReport>,
}

impl JudgeResult {
    /// Points contributed by this result: all or nothing.
    pub fn points(&self, weight: u64) -> u64 {
        if self.verdict == Verdict::AC {
            weight
        } else {
            0
        }
    }
}

/// A verdict plus compiler diagnostics when the verdict is CE.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgement {
    pub result: JudgeResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomTestReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compile_error: Option<String>,
    pub outcomes: Vec<RunOutcome>,
}

mod lossy_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&String::from_utf8_lossy(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        String::deserialize(d).map(String::into_bytes)
    }
}
