//! Down-sampling of the majority (not relevant) training class.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Labeled;
use crate::{Error, Result};

/// Percentage of negative training documents to keep, and the sampling seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingSpec {
    percentage: f64,
    pub seed: u64,
}

impl SamplingSpec {
    pub fn new(percentage: f64, seed: u64) -> Result<Self> {
        if !(percentage > 0.0 && percentage <= 100.0) {
            return Err(Error::param(
                "sampling",
                alloc::format!("percentage must be in (0, 100], got {percentage}"),
            ));
        }
        Ok(SamplingSpec { percentage, seed })
    }

    pub fn percentage(&self) -> f64 {
        self.percentage
    }

    /// floor(percentage / 100 * negatives). Multiplying before dividing keeps
    /// the result exact for integral percentages.
    pub fn retained(&self, negatives: usize) -> usize {
        if self.percentage == 100.0 {
            return negatives;
        }
        libm::floor(self.percentage * negatives as f64 / 100.0) as usize
    }
}

/// Keeps every positive and a seeded uniform sample (without replacement) of
/// the negatives. Survivors keep their input order.
pub fn down_sample<'a, D: Labeled>(docs: &'a [D], spec: &SamplingSpec) -> Result<Vec<&'a D>> {
    Ok(down_sample_indices(docs, spec)?
        .into_iter()
        .map(|i| &docs[i])
        .collect())
}

/// Positions of the documents [`down_sample`] keeps, ascending.
pub fn down_sample_indices<D: Labeled>(docs: &[D], spec: &SamplingSpec) -> Result<Vec<usize>> {
    let negatives: Vec<usize> = docs
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.label().is_relevant())
        .map(|(i, _)| i)
        .collect();
    let keep = spec.retained(negatives.len());
    if keep == 0 {
        return Err(Error::NoNegativesRetained);
    }
    let mut retained = alloc::vec![false; docs.len()];
    if keep == negatives.len() {
        for &i in &negatives {
            retained[i] = true;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for pick in rand::seq::index::sample(&mut rng, negatives.len(), keep) {
            retained[negatives[pick]] = true;
        }
    }
    Ok(docs
        .iter()
        .enumerate()
        .filter(|(i, d)| d.label().is_relevant() || retained[*i])
        .map(|(i, _)| i)
        .collect())
}
