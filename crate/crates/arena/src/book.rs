//! Canned solution books: the stand-in for model capability.
//!
//! ```json
//! {
//!   "model_id": "gpt-5-codex",
//!   "turn_tokens": [20000, 2000],
//!   "problems": {
//!     "b1": [{"source_file": "../solutions/b1.py", "language": "python3",
//!             "expected_verdict": "AC", "synthetic_tokens": [400000, 60000]}]
//!   }
//! }
//! ```
//!
//! Source paths are relative to the book file. `turn_tokens` is the usage
//! reported on turns that do not submit.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use arena_core::{LanguageId, Verdict};
use serde::{Deserialize, Serialize};

use crate::ArenaError;

pub const DEFAULT_MODEL: &str = "gpt-5-codex";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedSubmission {
    pub source: String,
    pub language: LanguageId,
    pub expected_verdict: Verdict,
    /// (input, output) tokens the attempt pretends to have used.
    pub synthetic_tokens: (u64, u64),
    /// Input fed to TEST_CODE by agents that test before submitting.
    #[serde(default)]
    pub test_input: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CannedSolutionBook {
    pub model_id: String,
    pub turn_tokens: (u64, u64),
    pub problems: BTreeMap<String, Vec<ScriptedSubmission>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBook {
    #[serde(default = "default_model")]
    model_id: String,
    #[serde(default)]
    turn_tokens: (u64, u64),
    problems: BTreeMap<String, Vec<RawEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    source_file: Option<PathBuf>,
    language: String,
    expected_verdict: Verdict,
    synthetic_tokens: (u64, u64),
    #[serde(default)]
    test_input: Option<String>,
}

fn default_model() -> String {
    DEFAULT_MODEL.to_string()
}

impl CannedSolutionBook {
    pub fn empty() -> Self {
        CannedSolutionBook {
            model_id: default_model(),
            turn_tokens: (0, 0),
            problems: BTreeMap::new(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ArenaError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ArenaError::io(path, e))?;
        let raw: RawBook = serde_json::from_str(&text).map_err(|e| ArenaError::parse(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut problems = BTreeMap::new();
        for (id, entries) in raw.problems {
            let mut list = Vec::with_capacity(entries.len());
            for entry in entries {
                let source = match (entry.source, entry.source_file) {
                    (Some(text), None) => text,
                    (None, Some(file)) => {
                        let file = base.join(file);
                        fs::read_to_string(&file).map_err(|e| ArenaError::io(&file, e))?
                    }
                    _ => {
                        return Err(ArenaError::InvalidBook(format!(
                            "{id}: each entry needs exactly one of `source` or `source_file`"
                        )))
                    }
                };
                let language = entry
                    .language
                    .parse()
                    .map_err(|e: String| ArenaError::InvalidBook(format!("{id}: {e}")))?;
                list.push(ScriptedSubmission {
                    source,
                    language,
                    expected_verdict: entry.expected_verdict,
                    synthetic_tokens: entry.synthetic_tokens,
                    test_input: entry.test_input,
                });
            }
            problems.insert(id, list);
        }
        Ok(CannedSolutionBook {
            model_id: raw.model_id,
            turn_tokens: raw.turn_tokens,
            problems,
        })
    }

    pub fn entries(&self, problem_id: &str) -> &[ScriptedSubmission] {
        self.problems
            .get(problem_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Problems with an accepted entry somewhere in their list.
    pub fn solvable(&self) -> impl Iterator<Item = &str> {
        self.problems
            .iter()
            .filter(|(_, list)| list.iter().any(|s| s.expected_verdict == Verdict::AC))
            .map(|(id, _)| id.as_str())
    }
}
