//! Contest manifests on disk.
//!
//! ```text
//! <root>/contest.toml            (or contest.json)
//! <root>/problems/<id>/statement.md
//! <root>/problems/<id>/meta      level and limits, TOML
//! <root>/problems/<id>/samples/NN.in, NN.out
//! <root>/problems/<id>/tests/NN.in, NN.out
//! ```
//!
//! The contest file carries every [`ContestConfig`] key at the top level plus
//! a `[contest]` table with the contest id and the qualification problem.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{validate_config, ConfigViolation, ContestConfig};
use crate::level::{DifficultyLevel, PerLevel};
use crate::problem::{Problem, TestCase};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("duplicate problem id `{0}`")]
    DuplicateId(String),
    #[error("problem distribution mismatch: {0}")]
    DistributionMismatch(String),
    #[error("malformed limits for problem `{problem}`: {message}")]
    MalformedLimits { problem: String, message: String },
    #[error("malformed test data for problem `{problem}`: {message}")]
    MalformedTests { problem: String, message: String },
    #[error("invalid contest config: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidConfig(Vec<ConfigViolation>),
    #[error("qualification problem `{0}` is not a Bronze problem of this contest")]
    BadQualificationProblem(String),
}

/// A loaded contest. Immutable after construction and safe to share.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contest {
    pub id: String,
    pub config: ContestConfig,
    /// Sorted by problem id.
    pub problems: Vec<Problem>,
    /// The designated easiest Bronze problem used for qualification.
    pub qualification_problem: Option<String>,
}

impl Contest {
    /// Builds a contest, enforcing the same invariants as [`load_contest`].
    pub fn new(
        id: impl Into<String>,
        config: ContestConfig,
        mut problems: Vec<Problem>,
        qualification_problem: Option<String>,
    ) -> Result<Self, ManifestError> {
        let violations = validate_config(&config);
        if !violations.is_empty() {
            return Err(ManifestError::InvalidConfig(violations));
        }
        let mut seen = HashSet::new();
        for p in &problems {
            if !seen.insert(p.id.as_str()) {
                return Err(ManifestError::DuplicateId(p.id.clone()));
            }
            if p.time_limit_ms == 0 || p.memory_limit_mib == 0 {
                return Err(ManifestError::MalformedLimits {
                    problem: p.id.clone(),
                    message: "time and memory limits must be > 0".into(),
                });
            }
            if p.hidden_tests.is_empty() {
                return Err(ManifestError::MalformedTests {
                    problem: p.id.clone(),
                    message: "no hidden tests".into(),
                });
            }
        }
        check_distribution(&config, &problems)?;
        if let Some(q) = &qualification_problem {
            let ok = problems
                .iter()
                .any(|p| &p.id == q && p.level == DifficultyLevel::Bronze);
            if !ok {
                return Err(ManifestError::BadQualificationProblem(q.clone()));
            }
        }
        problems.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Contest {
            id: id.into(),
            config,
            problems,
            qualification_problem,
        })
    }

    pub fn problem(&self, id: &str) -> Option<&Problem> {
        self.problems.iter().find(|p| p.id == id)
    }

    pub fn problem_ids(&self) -> impl Iterator<Item = &str> {
        self.problems.iter().map(|p| p.id.as_str())
    }

    pub fn checksums(&self) -> BTreeMap<String, String> {
        self.problems
            .iter()
            .map(|p| (p.id.clone(), p.checksum()))
            .collect()
    }

    /// Same problems under a different configuration, as used by ablations.
    pub fn with_config(&self, config: ContestConfig) -> Result<Self, ManifestError> {
        Contest::new(
            self.id.clone(),
            config,
            self.problems.clone(),
            self.qualification_problem.clone(),
        )
    }
}

fn check_distribution(config: &ContestConfig, problems: &[Problem]) -> Result<(), ManifestError> {
    let mut counts = PerLevel::new(0usize, 0, 0, 0);
    for p in problems {
        match p.level {
            DifficultyLevel::Bronze => counts.bronze += 1,
            DifficultyLevel::Silver => counts.silver += 1,
            DifficultyLevel::Gold => counts.gold += 1,
            DifficultyLevel::Platinum => counts.platinum += 1,
        }
    }
    if problems.len() != config.total_problems {
        return Err(ManifestError::DistributionMismatch(format!(
            "expected {} problems, found {}",
            config.total_problems,
            problems.len()
        )));
    }
    for (level, want) in config.problem_distribution.iter() {
        let got = counts.get(level);
        if got != want {
            return Err(ManifestError::DistributionMismatch(format!(
                "expected {want} {level} problems, found {got}"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ManifestFile {
    contest: ContestMeta,
    #[serde(flatten)]
    config: ContestConfig,
}

#[derive(Debug, Deserialize)]
struct ContestMeta {
    id: String,
    #[serde(default)]
    qualification_problem: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemMeta {
    #[serde(default)]
    id: Option<String>,
    level: DifficultyLevel,
    #[serde(default)]
    time_limit_ms: Option<i64>,
    #[serde(default)]
    memory_limit_mib: Option<i64>,
}

/// Loads and validates a contest manifest directory.
pub fn load_contest(root: impl AsRef<Path>) -> Result<Contest, ManifestError> {
    let root = root.as_ref();
    let manifest = read_manifest(root)?;
    let config = manifest.config;

    let problems_dir = root.join("problems");
    let mut dirs: Vec<PathBuf> = read_dir_sorted(&problems_dir)?
        .into_iter()
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();

    let mut problems = Vec::with_capacity(dirs.len());
    for dir in dirs {
        problems.push(load_problem(&dir, &config)?);
    }
    Contest::new(
        manifest.contest.id,
        config,
        problems,
        manifest.contest.qualification_problem,
    )
}

fn read_manifest(root: &Path) -> Result<ManifestFile, ManifestError> {
    let toml_path = root.join("contest.toml");
    let json_path = root.join("contest.json");
    if toml_path.is_file() {
        let text = read_text(&toml_path)?;
        toml::from_str(&text).map_err(|e| ManifestError::Parse {
            path: toml_path,
            message: e.to_string(),
        })
    } else if json_path.is_file() {
        let text = read_text(&json_path)?;
        serde_json::from_str(&text).map_err(|e| ManifestError::Parse {
            path: json_path,
            message: e.to_string(),
        })
    } else {
        Err(ManifestError::MissingFile(toml_path))
    }
}

fn load_problem(dir: &Path, config: &ContestConfig) -> Result<Problem, ManifestError> {
    let dir_name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let meta_path = dir.join("meta");
    let meta: ProblemMeta =
        toml::from_str(&read_text(&meta_path)?).map_err(|e| ManifestError::Parse {
            path: meta_path.clone(),
            message: e.to_string(),
        })?;
    let id = meta.id.unwrap_or(dir_name);

    let limit = |value: Option<i64>, default: u64, what: &str| -> Result<u64, ManifestError> {
        match value {
            None => Ok(default),
            Some(v) if v > 0 => Ok(v as u64),
            Some(v) => Err(ManifestError::MalformedLimits {
                problem: id.clone(),
                message: format!("{what} must be > 0, got {v}"),
            }),
        }
    };
    let time_limit_ms = limit(
        meta.time_limit_ms,
        config.judge.default_time_limit_ms,
        "time_limit_ms",
    )?;
    let memory_limit_mib = limit(
        meta.memory_limit_mib,
        config.judge.default_memory_limit_mib,
        "memory_limit_mib",
    )?;

    let statement = read_text(&dir.join("statement.md"))?;
    let samples_dir = dir.join("samples");
    let samples = if samples_dir.is_dir() {
        load_cases(&id, &samples_dir)?
    } else {
        Vec::new()
    };
    let tests_dir = dir.join("tests");
    if !tests_dir.is_dir() {
        return Err(ManifestError::MissingFile(tests_dir));
    }
    let hidden_tests = load_cases(&id, &tests_dir)?;

    Ok(Problem {
        id,
        level: meta.level,
        statement,
        samples,
        hidden_tests,
        time_limit_ms,
        memory_limit_mib,
    })
}

/// Reads `NN.in` / `NN.out` pairs in numeric order.
fn load_cases(problem: &str, dir: &Path) -> Result<Vec<TestCase>, ManifestError> {
    let malformed = |message: String| ManifestError::MalformedTests {
        problem: problem.to_owned(),
        message,
    };
    let mut inputs = BTreeMap::new();
    let mut outputs = BTreeMap::new();
    for path in read_dir_sorted(dir)? {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (stem, ext) = name
            .split_once('.')
            .ok_or_else(|| malformed(format!("unexpected file {name}")))?;
        if stem.len() != 2 || !stem.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed(format!("{name} is not named NN.in / NN.out")));
        }
        let index: u32 = stem.parse().expect("two ascii digits");
        match ext {
            "in" => inputs.insert(index, path),
            "out" => outputs.insert(index, path),
            _ => return Err(malformed(format!("unexpected extension in {name}"))),
        };
    }
    if inputs.keys().ne(outputs.keys()) {
        return Err(malformed(format!("unpaired files in {}", dir.display())));
    }
    inputs
        .into_iter()
        .map(|(index, input)| {
            Ok(TestCase {
                input: read_bytes(&input)?,
                expected_output: read_bytes(&outputs[&index])?,
            })
        })
        .collect()
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>, ManifestError> {
    let entries = fs::read_dir(dir).map_err(|e| io_error(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        paths.push(entry.map_err(|e| io_error(dir, e))?.path());
    }
    paths.sort();
    Ok(paths)
}

fn read_text(path: &Path) -> Result<String, ManifestError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, ManifestError> {
    fs::read(path).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, source: std::io::Error) -> ManifestError {
    if source.kind() == std::io::ErrorKind::NotFound {
        ManifestError::MissingFile(path.to_owned())
    } else {
        ManifestError::Io {
            path: path.to_owned(),
            source,
        }
    }
}
