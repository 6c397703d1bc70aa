use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::features::TokenValueType;
use crate::learners::{AlgorithmChoice, DEFAULT_C, DEFAULT_MAX_ITERATIONS};
use crate::{Error, Result};

/// Sets of values for each swept parameter plus the shared learner settings.
///
/// Dimensions are kept in canonical order: stemming on before off, numbers
/// ascending, value types as in [`TokenValueType::ALL`], SVM before LR.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGrid {
    pub stemming: Vec<bool>,
    pub ngram_orders: Vec<usize>,
    pub value_types: Vec<TokenValueType>,
    pub token_counts: Vec<usize>,
    pub sampling_percentages: Vec<f64>,
    pub algorithms: Vec<AlgorithmChoice>,
    pub seed: u64,
    pub c: f64,
    /// `None` selects each algorithm's default tolerance.
    pub tolerance: Option<f64>,
    pub max_iterations: usize,
}

pub const DEFAULT_SEED: u64 = 42;

impl ParameterGrid {
    /// The full published grid: 2 × 4 × 4 × 13 × 4 × 2 configurations.
    pub fn full() -> Self {
        ParameterGrid {
            stemming: alloc::vec![true, false],
            ngram_orders: alloc::vec![1, 2, 3, 4],
            value_types: TokenValueType::ALL.to_vec(),
            token_counts: alloc::vec![
                1_000, 3_000, 5_000, 7_000, 10_000, 15_000, 20_000, 25_000, 30_000, 35_000, 40_000,
                45_000, 50_000,
            ],
            sampling_percentages: alloc::vec![25.0, 50.0, 75.0, 100.0],
            algorithms: AlgorithmChoice::ALL.to_vec(),
            seed: DEFAULT_SEED,
            c: DEFAULT_C,
            tolerance: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    /// Sorts and deduplicates every dimension, then validates it.
    pub fn canonicalize(mut self) -> Result<Self> {
        self.stemming.sort_by(|a, b| b.cmp(a));
        self.stemming.dedup();
        self.ngram_orders.sort_unstable();
        self.ngram_orders.dedup();
        self.value_types.sort_unstable();
        self.value_types.dedup();
        self.token_counts.sort_unstable();
        self.token_counts.dedup();
        self.sampling_percentages.sort_by(f64::total_cmp);
        self.sampling_percentages.dedup();
        self.algorithms.sort_unstable();
        self.algorithms.dedup();
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let sizes = [
            ("stemming", self.stemming.len()),
            ("ngrams", self.ngram_orders.len()),
            ("value_type", self.value_types.len()),
            ("tokens", self.token_counts.len()),
            ("sampling", self.sampling_percentages.len()),
            ("algorithm", self.algorithms.len()),
        ];
        if let Some((name, _)) = sizes.iter().find(|(_, n)| *n == 0) {
            return Err(Error::EmptyDimension(name));
        }
        for config in self.configs() {
            config.validate()?;
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.stemming.len()
            * self.ngram_orders.len()
            * self.value_types.len()
            * self.token_counts.len()
            * self.sampling_percentages.len()
            * self.algorithms.len()
    }

    fn configs(&self) -> impl Iterator<Item = ExperimentConfig> + '_ {
        let mut out = Vec::with_capacity(self.size());
        for &stemming in &self.stemming {
            for &ngram_order in &self.ngram_orders {
                for &value_type in &self.value_types {
                    for &token_count in &self.token_counts {
                        for &sampling_percent in &self.sampling_percentages {
                            for &algorithm in &self.algorithms {
                                out.push(ExperimentConfig {
                                    stemming,
                                    ngram_order,
                                    value_type,
                                    token_count,
                                    sampling_percent,
                                    algorithm,
                                    seed: self.seed,
                                    c: self.c,
                                    tolerance: self
                                        .tolerance
                                        .unwrap_or_else(|| algorithm.default_tolerance()),
                                    max_iterations: self.max_iterations,
                                });
                            }
                        }
                    }
                }
            }
        }
        out.into_iter()
    }
}

/// Full cross-product, nested stemming → n-grams → value type → tokens →
/// sampling → algorithm (innermost), each dimension in canonical order.
pub fn enumerate_grid(grid: &ParameterGrid) -> Result<Vec<ExperimentConfig>> {
    let grid = grid.clone().canonicalize()?;
    Ok(grid.configs().collect())
}

/// One point of the grid with resolved learner settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub stemming: bool,
    pub ngram_order: usize,
    pub value_type: TokenValueType,
    pub token_count: usize,
    pub sampling_percent: f64,
    pub algorithm: AlgorithmChoice,
    pub seed: u64,
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ngram_order == 0 {
            return Err(Error::param("ngrams", "order must be at least 1"));
        }
        if self.token_count == 0 {
            return Err(Error::param("tokens", "must keep at least one token"));
        }
        if !(self.sampling_percent > 0.0 && self.sampling_percent <= 100.0) {
            return Err(Error::param(
                "sampling",
                alloc::format!("percentage must be in (0, 100], got {}", self.sampling_percent),
            ));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::param("c", "must be a positive finite number"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::param("tolerance", "must be a positive finite number"));
        }
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations", "must be at least 1"));
        }
        Ok(())
    }

    pub fn value(&self, dimension: Dimension) -> DimensionValue {
        match dimension {
            Dimension::Stemming => DimensionValue::Stemming(self.stemming),
            Dimension::NgramOrder => DimensionValue::NgramOrder(self.ngram_order),
            Dimension::ValueType => DimensionValue::ValueType(self.value_type),
            Dimension::TokenCount => DimensionValue::TokenCount(self.token_count),
            Dimension::Sampling => DimensionValue::Sampling(self.sampling_percent),
            Dimension::Algorithm => DimensionValue::Algorithm(self.algorithm),
        }
    }

    /// Enumeration order; learner settings break any remaining tie.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        Dimension::ALL
            .iter()
            .map(|&d| self.value(d).canonical_cmp(&other.value(d)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then(self.seed.cmp(&other.seed))
            .then(self.c.total_cmp(&other.c))
            .then(self.tolerance.total_cmp(&other.tolerance))
            .then(self.max_iterations.cmp(&other.max_iterations))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Stemming,
    NgramOrder,
    ValueType,
    TokenCount,
    Sampling,
    Algorithm,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Stemming,
        Dimension::NgramOrder,
        Dimension::ValueType,
        Dimension::TokenCount,
        Dimension::Sampling,
        Dimension::Algorithm,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            Dimension::Stemming => "stemming",
            Dimension::NgramOrder => "ngrams",
            Dimension::ValueType => "value_type",
            Dimension::TokenCount => "tokens",
            Dimension::Sampling => "sampling",
            Dimension::Algorithm => "algorithm",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Dimension::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .or(match s {
                "ngram_order" | "n" => Some(Dimension::NgramOrder),
                "token_count" | "token_counts" => Some(Dimension::TokenCount),
                "sampling_percent" | "down_sampling" => Some(Dimension::Sampling),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownDimension(String::from(s)))
    }
}

/// One value of one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DimensionValue {
    Stemming(bool),
    NgramOrder(usize),
    ValueType(TokenValueType),
    TokenCount(usize),
    Sampling(f64),
    Algorithm(AlgorithmChoice),
}

impl DimensionValue {
    /// Canonical order within a dimension; values of different dimensions
    /// compare by dimension.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        use DimensionValue::*;
        match (self, other) {
            (Stemming(a), Stemming(b)) => b.cmp(a),
            (NgramOrder(a), NgramOrder(b)) => a.cmp(b),
            (ValueType(a), ValueType(b)) => a.cmp(b),
            (TokenCount(a), TokenCount(b)) => a.cmp(b),
            (Sampling(a), Sampling(b)) => a.total_cmp(b),
            (Algorithm(a), Algorithm(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            DimensionValue::Stemming(_) => 0,
            DimensionValue::NgramOrder(_) => 1,
            DimensionValue::ValueType(_) => 2,
            DimensionValue::TokenCount(_) => 3,
            DimensionValue::Sampling(_) => 4,
            DimensionValue::Algorithm(_) => 5,
        }
    }
}

impl fmt::Display for DimensionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionValue::Stemming(true) => f.write_str("yes"),
            DimensionValue::Stemming(false) => f.write_str("no"),
            DimensionValue::NgramOrder(n) => write!(f, "{n}"),
            DimensionValue::ValueType(v) => write!(f, "{v}"),
            DimensionValue::TokenCount(k) => write!(f, "{k}"),
            DimensionValue::Sampling(p) => write!(f, "{p}"),
            DimensionValue::Algorithm(a) => write!(f, "{a}"),
        }
    }
}

/// Parses `yes`/`no` (also `true`/`false`, `1`/`0`).
pub fn parse_flag(name: &'static str, s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "yes" | "true" | "1" | "on" => Ok(true),
        "no" | "false" | "0" | "off" => Ok(false),
        other => Err(Error::param(name, alloc::format!("expected yes or no, got `{other}`"))),
    }
}
