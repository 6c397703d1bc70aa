//! Raw text to token sequences: normalize, tokenize, stem, expand to n-grams.

mod porter;

use alloc::string::String;
use alloc::vec::Vec;

pub use porter::porter_stem;

use crate::{Error, Result};

/// Grams of order 1 through `ngram_order`, each a space-joined run of unigrams.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub ngram_order: usize,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Lowercases and splits on every run of non-alphanumeric characters.
/// Digits are kept; repeated tokens are kept in order.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

/// Porter-stems each token when `enabled`; identity otherwise.
pub fn stem(tokens: Vec<String>, enabled: bool) -> Vec<String> {
    if !enabled {
        return tokens;
    }
    tokens.iter().map(|t| porter_stem(t)).collect()
}

/// Every contiguous gram of order 1 through `n`, grouped by order. A sequence
/// shorter than `n` simply yields no grams of the missing orders.
pub fn ngrams(tokens: &[String], n: usize) -> Result<TokenSequence> {
    if n == 0 {
        return Err(Error::param("ngrams", "order must be at least 1"));
    }
    let m = tokens.len();
    let mut out = Vec::with_capacity(gram_count(m, n));
    out.extend(tokens.iter().cloned());
    for order in 2..=n.min(m) {
        for window in tokens.windows(order) {
            let mut gram = String::with_capacity(window.iter().map(|t| t.len() + 1).sum());
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    gram.push(' ');
                }
                gram.push_str(t);
            }
            out.push(gram);
        }
    }
    Ok(TokenSequence {
        tokens: out,
        ngram_order: n,
    })
}

/// Number of grams `ngrams` emits for `m` unigrams at order `n`.
pub fn gram_count(m: usize, n: usize) -> usize {
    (1..=n.min(m)).map(|k| m - k + 1).sum()
}

/// tokenize → stem → ngrams, the preprocessing order used everywhere.
pub fn preprocess(text: &str, stemming: bool, n: usize) -> Result<TokenSequence> {
    ngrams(&stem(tokenize(text), stemming), n)
}
