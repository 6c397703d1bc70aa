//! Ranking-based review-effort metrics.
//!
//! Validation documents are sorted by descending score, ties by ascending id.
//! A recall target `r` is reached by the shortest prefix holding at least
//! `ceil(r * R)` relevant documents, where `R` is the number of relevant
//! validation documents. Percentages are relative to the whole validation set.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::{HashMap, HashSet};

use crate::corpus::Document;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDocument {
    pub doc_id: String,
    pub score: f64,
    pub relevant: bool,
}

/// Validation documents in review order with running relevant counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewCurve {
    entries: Vec<RankedDocument>,
    cum_relevant: Vec<usize>,
}

impl ReviewCurve {
    /// Sorts `entries` into review order. Rejects NaN scores, duplicate ids and
    /// curves without a relevant document.
    pub fn from_scored(mut entries: Vec<RankedDocument>) -> Result<Self> {
        if entries.iter().any(|e| e.score.is_nan()) {
            return Err(Error::NonFinite("validation score"));
        }
        let mut seen = HashSet::with_capacity(entries.len());
        for e in &entries {
            if !seen.insert(e.doc_id.as_str()) {
                return Err(Error::DuplicateId(e.doc_id.clone()));
            }
        }
        drop(seen);
        entries.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.doc_id.cmp(&b.doc_id))
        });
        let mut found = 0;
        let cum_relevant: Vec<usize> = entries
            .iter()
            .map(|e| {
                found += usize::from(e.relevant);
                found
            })
            .collect();
        if found == 0 {
            return Err(Error::NoRelevant);
        }
        Ok(ReviewCurve {
            entries,
            cum_relevant,
        })
    }

    pub fn entries(&self) -> &[RankedDocument] {
        &self.entries
    }

    /// `cumulative_relevant()[i]` counts relevant documents among the first
    /// `i + 1` in review order.
    pub fn cumulative_relevant(&self) -> &[usize] {
        &self.cum_relevant
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_relevant(&self) -> usize {
        self.cum_relevant.last().copied().unwrap_or(0)
    }

    /// Relevant documents needed to reach recall `r`: the least `k` with
    /// `k / R >= r`.
    pub fn required_relevant(&self, r: f64) -> Result<usize> {
        check_recall(r)?;
        let total = self.total_relevant();
        let reaches = |k: usize| k as f64 / total as f64 >= r;
        let mut k = (libm::ceil(r * total as f64) as usize).clamp(1, total);
        while k > 1 && reaches(k - 1) {
            k -= 1;
        }
        while !reaches(k) {
            k += 1;
        }
        Ok(k)
    }

    /// Length of the shortest prefix reaching recall `r`.
    pub fn review_prefix(&self, r: f64) -> Result<usize> {
        let k = self.required_relevant(r)?;
        Ok(self.cum_relevant.partition_point(|&c| c < k) + 1)
    }
}

fn check_recall(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(
            "recall",
            alloc::format!("recall target must be in (0, 1], got {r}"),
        ))
    }
}

/// Orders `docs` by `scores`. Every document needs a score; extra scores are
/// ignored.
pub fn build_curve<'a>(
    scores: &HashMap<String, f64>,
    docs: impl IntoIterator<Item = &'a Document>,
) -> Result<ReviewCurve> {
    let entries = docs
        .into_iter()
        .map(|d| {
            let score = *scores
                .get(d.id.as_str())
                .ok_or_else(|| Error::MissingScore(d.id.clone()))?;
            Ok(RankedDocument {
                doc_id: d.id.clone(),
                score,
                relevant: d.label.is_relevant(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ReviewCurve::from_scored(entries)
}

/// Percentage of the validation set reviewed to reach recall `r`.
pub fn percent_reviewed_at_recall(curve: &ReviewCurve, r: f64) -> Result<f64> {
    let prefix = curve.review_prefix(r)?;
    Ok(100.0 * prefix as f64 / curve.len() as f64)
}

/// Precision, in percent, of the prefix that reaches recall `r`.
pub fn precision_at_recall(curve: &ReviewCurve, r: f64) -> Result<f64> {
    let prefix = curve.review_prefix(r)?;
    Ok(100.0 * curve.cum_relevant[prefix - 1] as f64 / prefix as f64)
}

/// Strictly increasing recall fractions in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RecallTargets(Vec<f64>);

impl RecallTargets {
    pub const DEFAULT: [f64; 7] = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

    pub fn new(targets: Vec<f64>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::param("recall targets", "at least one target is required"));
        }
        for &r in &targets {
            check_recall(r)?;
        }
        if targets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("recall targets", "targets must be strictly increasing"));
        }
        Ok(RecallTargets(targets))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for RecallTargets {
    fn default() -> Self {
        RecallTargets(Self::DEFAULT.to_vec())
    }
}

/// Mean percent reviewed over `targets`.
pub fn model_summary(curve: &ReviewCurve, targets: &RecallTargets) -> f64 {
    let total: f64 = targets
        .as_slice()
        .iter()
        .map(|&r| percent_reviewed_at_recall(curve, r).expect("targets are validated"))
        .sum();
    total / targets.len() as f64
}

/// All metrics of one curve at each target.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMetrics {
    pub targets: Vec<f64>,
    pub percent_reviewed: Vec<f64>,
    pub precision: Vec<f64>,
    pub average_percent_reviewed: f64,
}

pub fn evaluate(curve: &ReviewCurve, targets: &RecallTargets) -> CurveMetrics {
    let targets = targets.as_slice().to_vec();
    let percent_reviewed: Vec<f64> = targets
        .iter()
        .map(|&r| percent_reviewed_at_recall(curve, r).expect("targets are validated"))
        .collect();
    let precision = targets
        .iter()
        .map(|&r| precision_at_recall(curve, r).expect("targets are validated"))
        .collect();
    let average_percent_reviewed = percent_reviewed.iter().sum::<f64>() / targets.len() as f64;
    CurveMetrics {
        targets,
        percent_reviewed,
        precision,
        average_percent_reviewed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Label, Split};
    use alloc::format;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ranked(labels: &[bool]) -> ReviewCurve {
        let n = labels.len();
        let entries = labels
            .iter()
            .enumerate()
            .map(|(i, &relevant)| RankedDocument {
                doc_id: format!("d{i:04}"),
                score: (n - i) as f64,
                relevant,
            })
            .collect();
        ReviewCurve::from_scored(entries).unwrap()
    }

    /// Quadratic oracle: scan prefixes, recounting relevant documents each time
    /// and comparing with exact integer arithmetic on a rational target.
    fn oracle_prefix(labels_in_order: &[bool], num: u64, den: u64) -> usize {
        let total = labels_in_order.iter().filter(|&&l| l).count() as u64;
        (1..=labels_in_order.len())
            .find(|&p| {
                let found = labels_in_order[..p].iter().filter(|&&l| l).count() as u64;
                found * den >= num * total
            })
            .unwrap()
    }

    #[test]
    fn distinct_scores_are_argsorted() {
        let entries = vec![
            RankedDocument { doc_id: "a".into(), score: 0.1, relevant: false },
            RankedDocument { doc_id: "b".into(), score: 0.9, relevant: true },
            RankedDocument { doc_id: "c".into(), score: -2.0, relevant: false },
            RankedDocument { doc_id: "d".into(), score: 0.5, relevant: true },
        ];
        let curve = ReviewCurve::from_scored(entries).unwrap();
        let order: Vec<&str> = curve.entries().iter().map(|e| e.doc_id.as_str()).collect();
        assert_eq!(order, ["b", "d", "a", "c"]);
        assert_eq!(curve.cumulative_relevant(), &[1, 2, 2, 2]);
    }

    #[test]
    fn equal_scores_fall_back_to_id_order() {
        let entries = ["q", "b", "z", "a"]
            .iter()
            .map(|id| RankedDocument { doc_id: (*id).into(), score: 1.0, relevant: *id == "z" })
            .collect();
        let curve = ReviewCurve::from_scored(entries).unwrap();
        let order: Vec<&str> = curve.entries().iter().map(|e| e.doc_id.as_str()).collect();
        assert_eq!(order, ["a", "b", "q", "z"]);
    }

    #[test]
    fn perfect_ranking_examples() {
        let mut labels = vec![true; 4];
        labels.extend([false; 6]);
        let curve = ranked(&labels);
        assert_eq!(percent_reviewed_at_recall(&curve, 0.5).unwrap(), 20.0);
        for r in RecallTargets::DEFAULT {
            assert_eq!(precision_at_recall(&curve, r).unwrap(), 100.0);
        }
    }

    #[test]
    fn worst_ranking_needs_the_whole_set_for_full_recall() {
        let mut labels = vec![false; 6];
        labels.extend([true; 4]);
        let curve = ranked(&labels);
        assert_eq!(percent_reviewed_at_recall(&curve, 1.0).unwrap(), 100.0);
        assert_eq!(percent_reviewed_at_recall(&curve, 0.25).unwrap(), 70.0);
    }

    #[test]
    fn perfect_ranking_half_prevalence_averages_thirty() {
        let mut labels = vec![true; 100];
        labels.extend([false; 100]);
        let curve = ranked(&labels);
        assert_eq!(model_summary(&curve, &RecallTargets::default()), 30.0);
    }

    #[test]
    fn single_target_summary_equals_the_target_value() {
        let labels = [false, true, true, false, true, false, false, true];
        let curve = ranked(&labels);
        let t = RecallTargets::new(vec![0.6]).unwrap();
        assert_eq!(
            model_summary(&curve, &t),
            percent_reviewed_at_recall(&curve, 0.6).unwrap()
        );
    }

    #[test]
    fn ten_document_fixture_by_hand() {
        // Order: R N R N N R N R N N; 4 relevant, 80% needs ceil(3.2) = 4.
        let labels = [true, false, true, false, false, true, false, true, false, false];
        let curve = ranked(&labels);
        assert_eq!(curve.review_prefix(0.8).unwrap(), 8);
        assert_eq!(precision_at_recall(&curve, 0.8).unwrap(), 50.0);
        assert_eq!(percent_reviewed_at_recall(&curve, 0.8).unwrap(), 80.0);
        // 50% needs 2 relevant, reached at rank 3.
        assert_eq!(percent_reviewed_at_recall(&curve, 0.5).unwrap(), 30.0);
        assert!((precision_at_recall(&curve, 0.5).unwrap() - 200.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn decimal_targets_do_not_overshoot() {
        // 0.7 * 10 evaluates to 7.000000000000001 in binary floating point.
        let mut labels = vec![true; 10];
        labels.extend([false; 10]);
        let curve = ranked(&labels);
        assert_eq!(curve.required_relevant(0.7).unwrap(), 7);
        assert_eq!(curve.review_prefix(0.7).unwrap(), 7);
        for (pct, total) in [(30u64, 10usize), (70, 30), (60, 5), (90, 20), (40, 25)] {
            let curve = ranked(&vec![true; total]);
            assert_eq!(
                curve.required_relevant(pct as f64 / 100.0).unwrap() as u64,
                (pct * total as u64).div_ceil(100)
            );
        }
    }

    #[test]
    fn scrambled_twenty_document_fixture() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let labels: Vec<bool> = (0..20).map(|i| i % 3 == 0 || rng.random_bool(0.2)).collect();
        let curve = ranked(&labels);
        let expected = oracle_prefix(&labels, 7, 10);
        assert_eq!(
            percent_reviewed_at_recall(&curve, 0.7).unwrap(),
            100.0 * expected as f64 / 20.0
        );
    }

    #[test]
    fn random_scores_cumulative_counts_match_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        let entries: Vec<RankedDocument> = (0..100)
            .map(|i| RankedDocument {
                doc_id: format!("doc{i}"),
                score: rng.random_range(-1.0..1.0),
                relevant: rng.random_bool(0.3) || i == 0,
            })
            .collect();
        let curve = ReviewCurve::from_scored(entries).unwrap();
        for p in 0..curve.len() {
            let recount = curve.entries()[..=p].iter().filter(|e| e.relevant).count();
            assert_eq!(curve.cumulative_relevant()[p], recount);
        }
        for w in curve.entries().windows(2) {
            assert!(w[0].score >= w[1].score);
        }
    }

    #[test]
    fn random_labels_precision_tracks_prevalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let labels: Vec<bool> = (0..20_000).map(|_| rng.random_bool(0.25)).collect();
        let curve = ranked(&labels);
        for r in RecallTargets::DEFAULT {
            let p = precision_at_recall(&curve, r).unwrap();
            assert!((p - 25.0).abs() < 2.0, "r={r}: precision {p}");
        }
    }

    #[test]
    fn build_curve_from_scores() {
        let docs = vec![
            Document::new("x", "", Label::Relevant, Split::Validation),
            Document::new("y", "", Label::NotRelevant, Split::Validation),
        ];
        let mut scores = HashMap::new();
        scores.insert(String::from("x"), 0.2);
        scores.insert(String::from("y"), 0.4);
        scores.insert(String::from("unused"), 9.0);
        let curve = build_curve(&scores, &docs).unwrap();
        assert_eq!(curve.entries()[0].doc_id, "y");
        assert_eq!(percent_reviewed_at_recall(&curve, 1.0).unwrap(), 100.0);

        scores.remove("y");
        assert_eq!(build_curve(&scores, &docs), Err(Error::MissingScore("y".into())));
    }

    #[test]
    fn error_cases() {
        let none = vec![RankedDocument { doc_id: "a".into(), score: 1.0, relevant: false }];
        assert_eq!(ReviewCurve::from_scored(none), Err(Error::NoRelevant));
        let nan = vec![RankedDocument { doc_id: "a".into(), score: f64::NAN, relevant: true }];
        assert!(matches!(ReviewCurve::from_scored(nan), Err(Error::NonFinite(_))));
        let dup = vec![
            RankedDocument { doc_id: "a".into(), score: 1.0, relevant: true },
            RankedDocument { doc_id: "a".into(), score: 2.0, relevant: true },
        ];
        assert_eq!(ReviewCurve::from_scored(dup), Err(Error::DuplicateId("a".into())));
        let curve = ranked(&[true]);
        assert!(curve.review_prefix(0.0).is_err());
        assert!(curve.review_prefix(1.5).is_err());
        assert!(RecallTargets::new(vec![]).is_err());
        assert!(RecallTargets::new(vec![0.5, 0.5]).is_err());
        assert!(RecallTargets::new(vec![0.5, 0.3]).is_err());
        assert!(RecallTargets::new(vec![0.0]).is_err());
    }

    fn scored_docs() -> impl Strategy<Value = Vec<(u8, bool)>> {
        prop::collection::vec((0u8..6, any::<bool>()), 1..200)
            .prop_filter("needs a relevant document", |v| v.iter().any(|d| d.1))
    }

    proptest! {
        #[test]
        fn metrics_agree_with_quadratic_oracle(docs in scored_docs(), pct in 1u64..=100) {
            let entries: Vec<RankedDocument> = docs
                .iter()
                .enumerate()
                .map(|(i, &(s, relevant))| RankedDocument {
                    doc_id: format!("{i:03}"),
                    score: s as f64,
                    relevant,
                })
                .collect();
            let mut order = entries.clone();
            order.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap().then(a.doc_id.cmp(&b.doc_id)));
            let labels: Vec<bool> = order.iter().map(|e| e.relevant).collect();
            let curve = ReviewCurve::from_scored(entries).unwrap();
            let r = pct as f64 / 100.0;
            let prefix = curve.review_prefix(r).unwrap();
            prop_assert_eq!(prefix, oracle_prefix(&labels, pct, 100));

            let k = curve.required_relevant(r).unwrap();
            prop_assert!(curve.cumulative_relevant()[prefix - 1] >= k);
            if prefix > 1 {
                prop_assert!(curve.cumulative_relevant()[prefix - 2] < k);
            }
            let found = labels[..prefix].iter().filter(|&&l| l).count();
            prop_assert_eq!(
                precision_at_recall(&curve, r).unwrap(),
                100.0 * found as f64 / prefix as f64
            );
        }

        #[test]
        fn percent_reviewed_is_monotone_in_recall(docs in scored_docs()) {
            let labels: Vec<bool> = docs.iter().map(|d| d.1).collect();
            let curve = ranked(&labels);
            let mut last = 0.0;
            for pct in 1..=100 {
                let v = percent_reviewed_at_recall(&curve, pct as f64 / 100.0).unwrap();
                prop_assert!(v >= last);
                last = v;
            }
            let c = curve.cumulative_relevant();
            prop_assert!(c.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(curve.total_relevant(), labels.iter().filter(|&&l| l).count());
        }

        #[test]
        fn input_order_of_ties_is_irrelevant(docs in scored_docs(), seed in any::<u64>()) {
            let entries: Vec<RankedDocument> = docs
                .iter()
                .enumerate()
                .map(|(i, &(s, relevant))| RankedDocument {
                    doc_id: format!("{i:03}"),
                    score: s as f64,
                    relevant,
                })
                .collect();
            let mut shuffled = entries.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
            let a = ReviewCurve::from_scored(entries).unwrap();
            let b = ReviewCurve::from_scored(shuffled).unwrap();
            let targets = RecallTargets::default();
            prop_assert_eq!(evaluate(&a, &targets), evaluate(&b, &targets));
            prop_assert_eq!(a, b);
        }
    }
}
