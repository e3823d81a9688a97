//! Priced hints at five levels: a static strategy guide, textbook sections
//! retrieved by BM25 (from a problem or a keyword), the most similar solved
//! library problem, and a curated example filtered by difficulty and topic.
//!
//! Every hint is charged to the participant's ledger before retrieval, and
//! the charge stands even when nothing matches.

mod bm25;
mod corpus;

use std::path::Path;

use arena_core::{Contest, CreditLedger, Credits, DifficultyLevel, LedgerError, Stamp};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bm25::{tokenize, Bm25Index, DEFAULT_B, DEFAULT_K1};
pub use corpus::{load_jsonl, parse_jsonl, Corpus, CorpusDoc, DocKind, Lexicon, Tags};

/// Level-1 excerpts are cut to this many characters.
pub const EXCERPT_CHARS: usize = 1_000;

#[derive(Debug, Error)]
pub enum HintError {
    #[error("cannot index an empty corpus")]
    EmptyCorpus,
    #[error("query has no searchable terms")]
    EmptyQuery,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("document {doc_id}: {reason}")]
    InvalidDoc { doc_id: String, reason: String },
    #[error("hint level {0} is out of range (0..=4)")]
    LevelOutOfRange(u8),
    #[error("hint level {level} requires `{parameter}`")]
    MissingParameter { level: u8, parameter: &'static str },
    #[error("unknown problem {0}")]
    UnknownProblem(String),
    /// Retrieval found nothing. The hint was still paid for.
    #[error("no document matched; {charged} credits were charged")]
    NoMatch { level: u8, charged: Credits },
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HintRequest {
    pub level: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint_knowledge: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem_difficulty: Option<DifficultyLevel>,
}

impl HintRequest {
    pub fn level(level: u8) -> Self {
        HintRequest {
            level,
            ..Default::default()
        }
    }

    pub fn problem(mut self, id: impl Into<String>) -> Self {
        self.problem_id = Some(id.into());
        self
    }

    pub fn knowledge(mut self, term: impl Into<String>) -> Self {
        self.hint_knowledge = Some(term.into());
        self
    }

    pub fn difficulty(mut self, level: DifficultyLevel) -> Self {
        self.problem_difficulty = Some(level);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HintResponse {
    pub level: u8,
    pub content: String,
    pub cost: Credits,
    pub source_doc_id: String,
}

/// The three corpora plus the term lexicon.
#[derive(Debug, Clone)]
pub struct HintLibrary {
    strategy: Vec<CorpusDoc>,
    textbook: Corpus,
    library: Corpus,
    lexicon: Lexicon,
}

impl HintLibrary {
    pub fn new(
        strategy: Vec<CorpusDoc>,
        textbook: Corpus,
        library: Corpus,
        lexicon: Lexicon,
    ) -> Result<Self, HintError> {
        if strategy.is_empty() {
            return Err(HintError::EmptyCorpus);
        }
        if let Some(stray) = strategy.iter().find(|d| d.kind != DocKind::Strategy) {
            return Err(HintError::InvalidDoc {
                doc_id: stray.doc_id.clone(),
                reason: "expected kind Strategy".into(),
            });
        }
        Ok(HintLibrary {
            strategy,
            textbook,
            library,
            lexicon,
        })
    }

    /// Loads `strategy.jsonl`, `textbook.jsonl`, `library.jsonl` and
    /// `lexicon.txt` from `dir`.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, HintError> {
        let dir = dir.as_ref();
        let strategy = load_jsonl(&dir.join("strategy.jsonl"))?;
        let textbook = Corpus::new(
            load_jsonl(&dir.join("textbook.jsonl"))?,
            DocKind::TextbookSection,
        )?;
        let library = Corpus::new(
            load_jsonl(&dir.join("library.jsonl"))?,
            DocKind::LibraryProblem,
        )?;
        let lexicon = Lexicon::load(&dir.join("lexicon.txt"))?;
        HintLibrary::new(strategy, textbook, library, lexicon)
    }

    pub fn textbook(&self) -> &Corpus {
        &self.textbook
    }

    pub fn library(&self) -> &Corpus {
        &self.library
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// Validates the request, charges the level's price to `ledger`, then
    /// retrieves. A request that fails validation is not charged; one that
    /// retrieves nothing is.
    pub fn get_hint(
        &self,
        request: &HintRequest,
        contest: &Contest,
        ledger: &mut CreditLedger,
        at: Stamp,
    ) -> Result<HintResponse, HintError> {
        let level = request.level;
        let query = self.prepare(request, contest)?;
        let cost = ledger.charge_hint(level, &contest.config, at)?;
        let found = self.retrieve(&query, &contest.id)?;
        match found {
            Some((doc, content)) => Ok(HintResponse {
                level,
                content,
                cost,
                source_doc_id: doc.doc_id.clone(),
            }),
            None => Err(HintError::NoMatch {
                level,
                charged: cost,
            }),
        }
    }

    fn prepare(&self, request: &HintRequest, contest: &Contest) -> Result<Query, HintError> {
        let level = request.level;
        let problem_text = |with_samples: bool| -> Result<String, HintError> {
            let id = request
                .problem_id
                .as_deref()
                .ok_or(HintError::MissingParameter {
                    level,
                    parameter: "problem_id",
                })?;
            let problem = contest
                .problem(id)
                .ok_or_else(|| HintError::UnknownProblem(id.to_string()))?;
            Ok(if with_samples {
                problem.statement_with_samples()
            } else {
                problem.statement.clone()
            })
        };
        let knowledge = || -> Result<String, HintError> {
            request
                .hint_knowledge
                .clone()
                .filter(|k| !k.trim().is_empty())
                .ok_or(HintError::MissingParameter {
                    level,
                    parameter: "hint_knowledge",
                })
        };
        Ok(match level {
            0 => Query::Strategy,
            1 => Query::Textbook {
                terms: self.lexicon.extract_terms(&problem_text(false)?).join(" "),
                excerpt: true,
            },
            2 => Query::Textbook {
                terms: knowledge()?,
                excerpt: false,
            },
            3 => Query::Similar(problem_text(true)?),
            4 => {
                let difficulty = request
                    .problem_difficulty
                    .ok_or(HintError::MissingParameter {
                        level,
                        parameter: "problem_difficulty",
                    })?;
                Query::Curated {
                    difficulty,
                    knowledge: knowledge()?,
                }
            }
            other => return Err(HintError::LevelOutOfRange(other)),
        })
    }

    fn retrieve(
        &self,
        query: &Query,
        live_contest: &str,
    ) -> Result<Option<(&CorpusDoc, String)>, HintError> {
        Ok(match query {
            Query::Strategy => {
                let content = self
                    .strategy
                    .iter()
                    .map(render_section)
                    .collect::<Vec<_>>()
                    .join("\n\n");
                Some((&self.strategy[0], content))
            }
            Query::Textbook { terms, excerpt } => match self.textbook.top(terms, |_| true) {
                Ok(doc) => doc.map(|d| {
                    let text = render_section(d);
                    (
                        d,
                        if *excerpt {
                            text.chars().take(EXCERPT_CHARS).collect()
                        } else {
                            text
                        },
                    )
                }),
                Err(HintError::EmptyQuery) => None,
                Err(e) => return Err(e),
            },
            Query::Similar(text) => match self
                .library
                .top(text, |d| d.contest_id.as_deref() != Some(live_contest))
            {
                Ok(doc) => doc.map(|d| (d, render_problem(d))),
                Err(HintError::EmptyQuery) => None,
                Err(e) => return Err(e),
            },
            Query::Curated {
                difficulty,
                knowledge,
            } => {
                let scores = self
                    .library
                    .index()
                    .score_all(knowledge)
                    .unwrap_or_default();
                let mut candidates: Vec<(&CorpusDoc, f64)> = self
                    .library
                    .docs()
                    .iter()
                    .zip(scores.iter().map(|s| s.1).chain(std::iter::repeat(0.0)))
                    .filter(|(d, _)| {
                        d.tags.difficulty == Some(*difficulty) && d.has_knowledge(knowledge)
                    })
                    .collect();
                candidates.sort_by(|a, b| {
                    b.1.total_cmp(&a.1)
                        .then_with(|| a.0.doc_id.cmp(&b.0.doc_id))
                });
                candidates.first().map(|(d, _)| (*d, render_problem(d)))
            }
        })
    }
}

enum Query {
    Strategy,
    Textbook {
        terms: String,
        excerpt: bool,
    },
    Similar(String),
    Curated {
        difficulty: DifficultyLevel,
        knowledge: String,
    },
}

fn render_section(doc: &CorpusDoc) -> String {
    format!("# {}\n\n{}", doc.title, doc.body)
}

fn render_problem(doc: &CorpusDoc) -> String {
    format!(
        "# {}\n\n{}\n\n## Solution\n\n{}",
        doc.title,
        doc.body,
        doc.solution.as_deref().unwrap_or("")
    )
}
