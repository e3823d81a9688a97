use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::HintError;

pub const DEFAULT_K1: f64 = 1.2;
pub const DEFAULT_B: f64 = 0.75;

/// Lowercases, splits on anything that is not alphanumeric, and drops
/// tokens shorter than two characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_lowercase)
        .collect()
}

/// Okapi BM25 over an immutable document set.
///
/// IDF is `ln(1 + (N - df + 0.5) / (df + 0.5))`, which stays positive even
/// for terms present in most documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bm25Index {
    doc_ids: Vec<String>,
    doc_lengths: Vec<u32>,
    /// term -> (document position, term frequency), positions ascending
    postings: BTreeMap<String, Vec<(usize, u32)>>,
    avg_doc_length: f64,
    k1: f64,
    b: f64,
}

impl Bm25Index {
    /// Indexes `(doc_id, text)` pairs with the default parameters.
    pub fn build<'a>(
        docs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, HintError> {
        Self::with_params(docs, DEFAULT_K1, DEFAULT_B)
    }

    pub fn with_params<'a>(
        docs: impl IntoIterator<Item = (&'a str, &'a str)>,
        k1: f64,
        b: f64,
    ) -> Result<Self, HintError> {
        let mut doc_ids = Vec::new();
        let mut doc_lengths = Vec::new();
        let mut postings: BTreeMap<String, Vec<(usize, u32)>> = BTreeMap::new();
        for (position, (id, text)) in docs.into_iter().enumerate() {
            let tokens = tokenize(text);
            let mut counts: BTreeMap<String, u32> = BTreeMap::new();
            for token in &tokens {
                *counts.entry(token.clone()).or_default() += 1;
            }
            for (term, tf) in counts {
                postings.entry(term).or_default().push((position, tf));
            }
            doc_ids.push(id.to_string());
            doc_lengths.push(tokens.len() as u32);
        }
        if doc_ids.is_empty() {
            return Err(HintError::EmptyCorpus);
        }
        let avg_doc_length =
            doc_lengths.iter().map(|&l| f64::from(l)).sum::<f64>() / doc_lengths.len() as f64;
        Ok(Bm25Index {
            doc_ids,
            doc_lengths,
            postings,
            avg_doc_length,
            k1,
            b,
        })
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn avg_doc_length(&self) -> f64 {
        self.avg_doc_length
    }

    pub fn doc_lengths(&self) -> &[u32] {
        &self.doc_lengths
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn vocabulary_size(&self) -> usize {
        self.postings.len()
    }

    fn idf(&self, df: usize) -> f64 {
        let n = self.doc_ids.len() as f64;
        let df = df as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    fn term_weight(&self, tf: u32, len: u32, idf: f64) -> f64 {
        let tf = f64::from(tf);
        let norm = 1.0 - self.b + self.b * f64::from(len) / self.avg_doc_length;
        idf * tf * (self.k1 + 1.0) / (tf + self.k1 * norm)
    }

    fn query_terms(query: &str) -> Result<Vec<String>, HintError> {
        let mut terms = tokenize(query);
        if terms.is_empty() {
            return Err(HintError::EmptyQuery);
        }
        let mut seen = std::collections::HashSet::new();
        terms.retain(|t| seen.insert(t.clone()));
        Ok(terms)
    }

    fn accumulate(&self, terms: &[String]) -> HashMap<usize, f64> {
        let mut scores: HashMap<usize, f64> = HashMap::new();
        for term in terms {
            if let Some(list) = self.postings.get(term) {
                let idf = self.idf(list.len());
                for &(doc, tf) in list {
                    *scores.entry(doc).or_default() +=
                        self.term_weight(tf, self.doc_lengths[doc], idf);
                }
            }
        }
        scores
    }

    /// Top `k` documents containing at least one query term, by descending
    /// score with ties broken by ascending doc id. `keep` is applied before
    /// ranking. Repeated query terms count once.
    pub fn search(
        &self,
        query: &str,
        k: usize,
        keep: impl Fn(&str) -> bool,
    ) -> Result<Vec<(String, f64)>, HintError> {
        if k == 0 {
            return Err(HintError::ZeroK);
        }
        let terms = Self::query_terms(query)?;
        let mut hits: Vec<(String, f64)> = self
            .accumulate(&terms)
            .into_iter()
            .filter(|&(doc, _)| keep(&self.doc_ids[doc]))
            .map(|(doc, score)| (self.doc_ids[doc].clone(), score))
            .collect();
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        hits.truncate(k);
        Ok(hits)
    }

    /// Score of every document for `query`, zero where no term matches,
    /// in index order.
    pub fn score_all(&self, query: &str) -> Result<Vec<(String, f64)>, HintError> {
        let terms = Self::query_terms(query)?;
        let scores = self.accumulate(&terms);
        Ok(self
            .doc_ids
            .iter()
            .enumerate()
            .map(|(doc, id)| (id.clone(), scores.get(&doc).copied().unwrap_or(0.0)))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_lowercases_and_drops_short_tokens() {
        assert_eq!(
            tokenize("A Segment-Tree, O(n log n)!"),
            ["segment", "tree", "log"]
        );
        assert!(tokenize("a b c ,.").is_empty());
    }

    #[test]
    fn average_length_is_mean_of_token_counts() {
        let ten = "aa ".repeat(10);
        let twenty = "bb ".repeat(20);
        let thirty = "cc ".repeat(30);
        let index = Bm25Index::build([
            ("a", ten.as_str()),
            ("b", twenty.as_str()),
            ("c", thirty.as_str()),
        ])
        .unwrap();
        assert_eq!(index.avg_doc_length(), 20.0);
        assert_eq!(index.doc_lengths(), [10, 20, 30]);
    }

    #[test]
    fn empty_corpus_and_query_are_rejected() {
        assert!(matches!(Bm25Index::build([]), Err(HintError::EmptyCorpus)));
        let index = Bm25Index::build([("a", "segment tree")]).unwrap();
        assert!(matches!(
            index.search("x !", 3, |_| true),
            Err(HintError::EmptyQuery)
        ));
        assert!(matches!(
            index.search("tree", 0, |_| true),
            Err(HintError::ZeroK)
        ));
    }

    #[test]
    fn rebuild_is_identical() {
        let docs = [("a", "segment tree range query"), ("b", "binary search")];
        assert_eq!(
            Bm25Index::build(docs).unwrap(),
            Bm25Index::build(docs).unwrap()
        );
    }

    #[test]
    fn absent_term_yields_nothing_and_large_k_returns_all_matches() {
        let index = Bm25Index::build([
            ("a", "segment tree"),
            ("b", "binary search"),
            ("c", "tree walk"),
        ])
        .unwrap();
        assert!(index.search("dijkstra", 5, |_| true).unwrap().is_empty());
        let ids: Vec<_> = index
            .search("tree", 50, |_| true)
            .unwrap()
            .into_iter()
            .map(|h| h.0)
            .collect();
        assert_eq!(ids, ["a", "c"]);
    }
}
