//! Vocabulary statistics, token value weighting, information-gain selection
//! and sparse document vectors.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::HashMap;

use crate::corpus::Label;
use crate::textprep::TokenSequence;
use crate::{Error, Result};

/// How a present token is turned into a feature value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenValueType {
    Binary,
    Frequency,
    NormalizedTermFrequency,
    Tfidf,
}

impl TokenValueType {
    pub const ALL: [TokenValueType; 4] = [
        TokenValueType::Binary,
        TokenValueType::Frequency,
        TokenValueType::NormalizedTermFrequency,
        TokenValueType::Tfidf,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            TokenValueType::Binary => "binary",
            TokenValueType::Frequency => "frequency",
            TokenValueType::NormalizedTermFrequency => "ntf",
            TokenValueType::Tfidf => "tfidf",
        }
    }
}

impl fmt::Display for TokenValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TokenValueType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(TokenValueType::Binary),
            "frequency" | "tf" => Ok(TokenValueType::Frequency),
            "ntf" | "normalized_term_frequency" => Ok(TokenValueType::NormalizedTermFrequency),
            "tfidf" => Ok(TokenValueType::Tfidf),
            other => Err(Error::param(
                "value_type",
                alloc::format!("expected binary, frequency, ntf or tfidf, got `{other}`"),
            )),
        }
    }
}

/// Feature value of a token that occurs `tr` times in a document whose most
/// frequent (kept) token occurs `max_tf` times. `n` and `n_t` are the number of
/// training documents and the number containing the token; only TFIDF reads them.
///
/// * binary: `1`
/// * frequency: `tr`
/// * normalized term frequency: `0.5 + 0.5 * tr / max_tf`
/// * tfidf: `ntf * ln(n / n_t)`
pub fn token_value(value_type: TokenValueType, tr: u32, max_tf: u32, n: u32, n_t: u32) -> Result<f64> {
    if tr == 0 {
        return Err(Error::param("tr", "term frequency must be at least 1"));
    }
    if max_tf < tr {
        return Err(Error::param(
            "max_tf",
            alloc::format!("max_tf {max_tf} is below term frequency {tr}"),
        ));
    }
    Ok(match value_type {
        TokenValueType::Binary => 1.0,
        TokenValueType::Frequency => f64::from(tr),
        TokenValueType::NormalizedTermFrequency => ntf(tr, max_tf),
        TokenValueType::Tfidf => {
            if n_t == 0 || n_t > n {
                return Err(Error::param(
                    "n_t",
                    alloc::format!("need 1 <= n_t <= n, got n_t = {n_t}, n = {n}"),
                ));
            }
            ntf(tr, max_tf) * libm::log(f64::from(n) / f64::from(n_t))
        }
    })
}

fn ntf(tr: u32, max_tf: u32) -> f64 {
    0.5 + 0.5 * (f64::from(tr) / f64::from(max_tf))
}

/// Document-level statistics for every distinct training gram.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    doc_freq: Vec<u32>,
    pos_doc_freq: Vec<u32>,
    documents: u32,
    positives: u32,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, index: u32) -> &str {
        &self.tokens[index as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn lookup(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    /// N_t: training documents containing the token.
    pub fn doc_frequency(&self, index: u32) -> u32 {
        self.doc_freq[index as usize]
    }

    /// (relevant, not relevant) training documents containing the token.
    pub fn class_doc_counts(&self, index: u32) -> (u32, u32) {
        let i = index as usize;
        (self.pos_doc_freq[i], self.doc_freq[i] - self.pos_doc_freq[i])
    }

    /// N: training documents, including ones that produced no tokens.
    pub fn documents(&self) -> u32 {
        self.documents
    }

    /// (relevant, not relevant) training document totals.
    pub fn class_totals(&self) -> (u32, u32) {
        (self.positives, self.documents - self.positives)
    }

    /// Term counts of a sequence restricted to this vocabulary.
    pub fn term_stats(&self, sequence: &TokenSequence) -> TermStats {
        TermStats::from_ids(
            sequence
                .tokens
                .iter()
                .filter_map(|t| self.lookup(t))
                .collect(),
        )
    }
}

/// Builds the vocabulary over training sequences only.
pub fn build_vocabulary(sequences: &[TokenSequence], labels: &[Label]) -> Result<Vocabulary> {
    build_vocabulary_with_stats(sequences, labels).map(|(v, _)| v)
}

/// Like [`build_vocabulary`], also returning each sequence's term counts.
pub fn build_vocabulary_with_stats(
    sequences: &[TokenSequence],
    labels: &[Label],
) -> Result<(Vocabulary, Vec<TermStats>)> {
    if sequences.len() != labels.len() {
        return Err(Error::param(
            "labels",
            alloc::format!("{} labels for {} sequences", labels.len(), sequences.len()),
        ));
    }
    let mut vocab = Vocabulary {
        tokens: Vec::new(),
        index: HashMap::new(),
        doc_freq: Vec::new(),
        pos_doc_freq: Vec::new(),
        documents: sequences.len() as u32,
        positives: labels.iter().filter(|l| l.is_relevant()).count() as u32,
    };
    let mut stats = Vec::with_capacity(sequences.len());
    for (seq, label) in sequences.iter().zip(labels) {
        let mut ids = Vec::with_capacity(seq.tokens.len());
        for gram in &seq.tokens {
            let id = match vocab.index.get(gram.as_str()) {
                Some(&id) => id,
                None => {
                    let id = vocab.tokens.len() as u32;
                    vocab.index.insert(gram.clone(), id);
                    vocab.tokens.push(gram.clone());
                    vocab.doc_freq.push(0);
                    vocab.pos_doc_freq.push(0);
                    id
                }
            };
            ids.push(id);
        }
        let term_stats = TermStats::from_ids(ids);
        for &(id, _) in &term_stats.terms {
            vocab.doc_freq[id as usize] += 1;
            if label.is_relevant() {
                vocab.pos_doc_freq[id as usize] += 1;
            }
        }
        stats.push(term_stats);
    }
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok((vocab, stats))
}

/// Per-document term frequencies, keyed by vocabulary index (ascending).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermStats {
    pub terms: Vec<(u32, u32)>,
}

impl TermStats {
    pub fn from_ids(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        let mut terms: Vec<(u32, u32)> = Vec::new();
        for id in ids {
            match terms.last_mut() {
                Some((last, count)) if *last == id => *count += 1,
                _ => terms.push((id, 1)),
            }
        }
        TermStats { terms }
    }

    pub fn max_tf(&self) -> u32 {
        self.terms.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }
}

fn entropy2(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * libm::log2(x) };
    term(p) + term(1.0 - p)
}

/// Information gain (bits) of each token's presence about the class label,
/// indexed like the vocabulary. With a single class every score is 0.
pub fn information_gain(vocab: &Vocabulary) -> Vec<f64> {
    let n = f64::from(vocab.documents);
    let (pos, _) = vocab.class_totals();
    let pos = f64::from(pos);
    if n == 0.0 {
        return alloc::vec![0.0; vocab.len()];
    }
    let prior = entropy2(pos / n);
    (0..vocab.len() as u32)
        .map(|i| {
            let (a, b) = vocab.class_doc_counts(i);
            let present = f64::from(a + b);
            let absent = n - present;
            let mut conditional = present / n * entropy2(f64::from(a) / present);
            if absent > 0.0 {
                conditional += absent / n * entropy2((pos - f64::from(a)) / absent);
            }
            // Only rounding can push this outside [0, prior].
            (prior - conditional).clamp(0.0, prior)
        })
        .collect()
}

/// All token indices ordered by descending information gain, ties by token text.
pub fn rank_by_information_gain(vocab: &Vocabulary, ig: &[f64]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..vocab.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        ig[b as usize]
            .total_cmp(&ig[a as usize])
            .then_with(|| vocab.token(a).cmp(vocab.token(b)))
    });
    order
}

/// The selected subset of a vocabulary, re-indexed densely `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedVocabulary {
    selected: Vec<u32>,
    to_reduced: Vec<u32>,
}

const NOT_SELECTED: u32 = u32::MAX;

impl ReducedVocabulary {
    /// Keeps the first `k` entries of `ranking` (a permutation of `0..vocab_len`).
    pub fn from_ranking(ranking: &[u32], vocab_len: usize, k: usize) -> Self {
        let selected: Vec<u32> = ranking.iter().take(k).copied().collect();
        let mut to_reduced = alloc::vec![NOT_SELECTED; vocab_len];
        for (reduced, &full) in selected.iter().enumerate() {
            to_reduced[full as usize] = reduced as u32;
        }
        ReducedVocabulary {
            selected,
            to_reduced,
        }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn reduced_index(&self, full: u32) -> Option<u32> {
        match self.to_reduced.get(full as usize) {
            Some(&r) if r != NOT_SELECTED => Some(r),
            _ => None,
        }
    }

    /// Vocabulary index of a reduced index.
    pub fn full_index(&self, reduced: u32) -> u32 {
        self.selected[reduced as usize]
    }

    pub fn selected(&self) -> &[u32] {
        &self.selected
    }
}

/// The `k` highest-gain tokens; all of them when `k` exceeds the vocabulary.
pub fn select_top_k(vocab: &Vocabulary, ig: &[f64], k: usize) -> Result<ReducedVocabulary> {
    if k == 0 {
        return Err(Error::param("tokens", "must keep at least one token"));
    }
    if ig.len() != vocab.len() {
        return Err(Error::param("ig_scores", "one score per vocabulary entry required"));
    }
    let ranking = rank_by_information_gain(vocab, ig);
    Ok(ReducedVocabulary::from_ranking(&ranking, vocab.len(), k))
}

/// Sparse feature vector: ascending indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    pub doc_id: String,
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Sorts by index and drops zero values. Repeated indices or non-finite
    /// values are rejected.
    pub fn new(doc_id: impl Into<String>, mut entries: Vec<(u32, f64)>) -> Result<Self> {
        if entries.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite("sparse vector value"));
        }
        entries.retain(|&(_, v)| v != 0.0);
        entries.sort_unstable_by_key(|&(i, _)| i);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::param("entries", "repeated feature index"));
        }
        Ok(SparseVector {
            doc_id: doc_id.into(),
            entries,
        })
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: u32) -> Option<f64> {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|&(i, _)| i)
    }
}

/// Vectorizes precomputed term counts. `max_tf` is taken over the grams that
/// survive selection; TFIDF uses the full training statistics in `vocab`.
pub fn vectorize_stats(
    doc_id: &str,
    stats: &TermStats,
    vocab: &Vocabulary,
    reduced: &ReducedVocabulary,
    value_type: TokenValueType,
) -> SparseVector {
    let kept: Vec<(u32, u32, u32)> = stats
        .terms
        .iter()
        .filter_map(|&(full, tr)| reduced.reduced_index(full).map(|r| (r, full, tr)))
        .collect();
    let max_tf = kept.iter().map(|&(_, _, tr)| tr).max().unwrap_or(0);
    let n = vocab.documents();
    let mut entries: Vec<(u32, f64)> = kept
        .into_iter()
        .filter_map(|(r, full, tr)| {
            let value = token_value(value_type, tr, max_tf, n, vocab.doc_frequency(full))
                .expect("counts from the vocabulary satisfy token_value preconditions");
            (value != 0.0).then_some((r, value))
        })
        .collect();
    entries.sort_unstable_by_key(|&(i, _)| i);
    SparseVector {
        doc_id: String::from(doc_id),
        entries,
    }
}

/// Vectorizes a token sequence; out-of-vocabulary grams are ignored.
pub fn vectorize(
    doc_id: &str,
    sequence: &TokenSequence,
    vocab: &Vocabulary,
    reduced: &ReducedVocabulary,
    value_type: TokenValueType,
) -> SparseVector {
    vectorize_stats(doc_id, &vocab.term_stats(sequence), vocab, reduced, value_type)
}
