use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use arena_core::DifficultyLevel;
use serde::{Deserialize, Serialize};

use crate::bm25::{tokenize, Bm25Index};
use crate::HintError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocKind {
    Strategy,
    TextbookSection,
    LibraryProblem,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty: Option<DifficultyLevel>,
    #[serde(default)]
    pub knowledge: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusDoc {
    pub doc_id: String,
    pub kind: DocKind,
    pub title: String,
    pub body: String,
    #[serde(default)]
    pub tags: Tags,
    /// Contest the document was drawn from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contest_id: Option<String>,
    /// Worked solution; required for library problems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
}

impl CorpusDoc {
    fn check(&self) -> Result<(), String> {
        if self.body.trim().is_empty() {
            return Err("empty body".into());
        }
        if self.kind == DocKind::LibraryProblem {
            if self.tags.difficulty.is_none() {
                return Err("library problem without difficulty".into());
            }
            if self.solution.as_deref().is_none_or(|s| s.trim().is_empty()) {
                return Err("library problem without solution".into());
            }
        }
        Ok(())
    }

    fn indexed_text(&self) -> String {
        format!("{}\n{}", self.title, self.body)
    }

    /// True if any knowledge tag equals `term`, ignoring case and spacing.
    pub fn has_knowledge(&self, term: &str) -> bool {
        let wanted = tokenize(term);
        self.tags
            .knowledge
            .iter()
            .any(|tag| tokenize(tag) == wanted)
    }
}

/// Parses line-delimited JSON, one document per non-blank line.
pub fn parse_jsonl(text: &str, origin: &str) -> Result<Vec<CorpusDoc>, HintError> {
    let mut docs = Vec::new();
    let mut ids = BTreeSet::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: CorpusDoc = serde_json::from_str(line).map_err(|e| HintError::Parse {
            origin: origin.to_string(),
            line: n + 1,
            message: e.to_string(),
        })?;
        doc.check().map_err(|reason| HintError::InvalidDoc {
            doc_id: doc.doc_id.clone(),
            reason,
        })?;
        if !ids.insert(doc.doc_id.clone()) {
            return Err(HintError::InvalidDoc {
                doc_id: doc.doc_id,
                reason: "duplicate doc_id".into(),
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn load_jsonl(path: &Path) -> Result<Vec<CorpusDoc>, HintError> {
    let text = fs::read_to_string(path).map_err(|source| HintError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_jsonl(&text, &path.display().to_string())
}

/// A document set of one kind with its BM25 index.
#[derive(Debug, Clone)]
pub struct Corpus {
    docs: Vec<CorpusDoc>,
    index: Bm25Index,
}

impl Corpus {
    /// Indexes title and body of every document.
    pub fn new(docs: Vec<CorpusDoc>, kind: DocKind) -> Result<Self, HintError> {
        if let Some(stray) = docs.iter().find(|d| d.kind != kind) {
            return Err(HintError::InvalidDoc {
                doc_id: stray.doc_id.clone(),
                reason: format!("expected kind {kind:?}"),
            });
        }
        let texts: Vec<(String, String)> = docs
            .iter()
            .map(|d| (d.doc_id.clone(), d.indexed_text()))
            .collect();
        let index = Bm25Index::build(texts.iter().map(|(id, text)| (id.as_str(), text.as_str())))?;
        Ok(Corpus { docs, index })
    }

    pub fn docs(&self) -> &[CorpusDoc] {
        &self.docs
    }

    pub fn index(&self) -> &Bm25Index {
        &self.index
    }

    pub fn doc(&self, doc_id: &str) -> Option<&CorpusDoc> {
        self.docs.iter().find(|d| d.doc_id == doc_id)
    }

    /// Best-scoring document among those passing `keep`.
    pub fn top(
        &self,
        query: &str,
        keep: impl Fn(&CorpusDoc) -> bool,
    ) -> Result<Option<&CorpusDoc>, HintError> {
        let hits = self
            .index
            .search(query, 1, |id| self.doc(id).is_some_and(&keep))?;
        Ok(hits.first().and_then(|(id, _)| self.doc(id)))
    }
}

/// Curated algorithm and data-structure terms, one per line.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<(String, Vec<String>)>,
}

impl Lexicon {
    pub fn parse(text: &str) -> Self {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for line in text.lines() {
            let term = line.trim();
            if term.is_empty() || term.starts_with('#') {
                continue;
            }
            let tokens = tokenize(term);
            if !tokens.is_empty() && seen.insert(tokens.clone()) {
                entries.push((term.to_lowercase(), tokens));
            }
        }
        Lexicon { entries }
    }

    pub fn load(path: &Path) -> Result<Self, HintError> {
        fs::read_to_string(path)
            .map(|t| Lexicon::parse(&t))
            .map_err(|source| HintError::Io {
                path: path.display().to_string(),
                source,
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lexicon entries occurring in `text` as contiguous token runs, in
    /// order of first occurrence. Entries starting at the same token keep
    /// lexicon order.
    pub fn extract_terms(&self, text: &str) -> Vec<String> {
        let tokens = tokenize(text);
        let mut found: Vec<(usize, usize, &str)> = Vec::new();
        for (rank, (term, seq)) in self.entries.iter().enumerate() {
            if let Some(pos) = tokens.windows(seq.len()).position(|w| w == seq.as_slice()) {
                found.push((pos, rank, term));
            }
        }
        found.sort();
        found
            .into_iter()
            .map(|(_, _, term)| term.to_string())
            .collect()
    }
}
