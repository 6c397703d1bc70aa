use super::*;
use crate::corpus::{Corpus, Document, Label, Split};
use crate::evaluation::{CurveMetrics, RecallTargets};
use crate::features::TokenValueType;
use crate::learners::AlgorithmChoice;
use crate::synthetic::{generate, SyntheticSpec};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(algorithm: AlgorithmChoice) -> ExperimentConfig {
    ExperimentConfig {
        stemming: false,
        ngram_order: 1,
        value_type: TokenValueType::NormalizedTermFrequency,
        token_count: 1000,
        sampling_percent: 100.0,
        algorithm,
        seed: 42,
        c: 1.0,
        tolerance: algorithm.default_tolerance(),
        max_iterations: 1000,
    }
}

/// The word "alpha" appears in exactly the relevant documents.
fn separable_corpus() -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let filler = ["lorem", "ipsum", "dolor", "sit", "amet", "consectetur", "adipiscing", "elit"];
    let mut docs = Vec::new();
    for i in 0..120 {
        let relevant = i % 4 == 0;
        let mut words: Vec<&str> = (0..8).map(|_| filler[rng.random_range(0..filler.len())]).collect();
        if relevant {
            words.insert(rng.random_range(0..=words.len()), "alpha");
        }
        let split = if i < 80 { Split::Training } else { Split::Validation };
        let label = if relevant { Label::Relevant } else { Label::NotRelevant };
        docs.push(Document::new(format!("d{i:03}"), words.join(" "), label, split));
    }
    Corpus::new("separable", docs).unwrap()
}

fn with_full_recall() -> RecallTargets {
    let mut t = RecallTargets::DEFAULT.to_vec();
    t.push(1.0);
    RecallTargets::new(t).unwrap()
}

#[test]
fn separable_corpus_needs_only_the_relevant_documents() {
    let corpus = separable_corpus();
    let targets = with_full_recall();
    let validation = corpus.validation().count() as f64;
    let relevant = corpus.validation().filter(|d| d.label.is_relevant()).count() as f64;
    for algorithm in AlgorithmChoice::ALL {
        for value_type in TokenValueType::ALL {
            for n in 1..=2 {
                let cfg = ExperimentConfig {
                    value_type,
                    ngram_order: n,
                    ..config(algorithm)
                };
                let result = run_experiment(&cfg, &corpus, &targets);
                let m = result.metrics.expect("experiment succeeds");
                let at_full = *m.percent_reviewed.last().unwrap();
                assert!(
                    at_full <= 100.0 * (relevant + 1.0) / validation,
                    "{algorithm} {value_type} n={n}: {at_full}"
                );
            }
        }
    }
}

#[test]
fn token_count_beyond_vocabulary_is_clamped() {
    let corpus = separable_corpus();
    let targets = RecallTargets::default();
    let prepared = PreparedCorpus::new(&corpus, false, 2).unwrap();
    let v = prepared.vocabulary().len();
    for algorithm in AlgorithmChoice::ALL {
        let exact = run_prepared(&prepared, &ExperimentConfig { ngram_order: 2, token_count: v, ..config(algorithm) }, &targets);
        let huge = run_prepared(&prepared, &ExperimentConfig { ngram_order: 2, token_count: 50_000, ..config(algorithm) }, &targets);
        assert_eq!(exact.metrics, huge.metrics);
        assert_eq!(exact.diagnostics, huge.diagnostics);
        assert_eq!(huge.diagnostics.selected_tokens, v);
    }
}

#[test]
fn repeated_runs_are_identical() {
    let corpus = generate(&SyntheticSpec::planted_signal(11)).unwrap();
    let targets = RecallTargets::default();
    for algorithm in AlgorithmChoice::ALL {
        let cfg = ExperimentConfig { sampling_percent: 50.0, ..config(algorithm) };
        assert_eq!(run_experiment(&cfg, &corpus, &targets), run_experiment(&cfg, &corpus, &targets));
    }
}

#[test]
fn failures_are_rows_not_panics() {
    let docs = vec![
        Document::new("a", "x y", Label::Relevant, Split::Training),
        Document::new("b", "x z", Label::Relevant, Split::Training),
        Document::new("c", "y", Label::Relevant, Split::Validation),
    ];
    let corpus = Corpus::new("one-class", docs).unwrap();
    let result = run_experiment(&config(AlgorithmChoice::Svm), &corpus, &RecallTargets::default());
    assert!(!result.is_ok());
    assert!(result.metrics.is_none());
    assert!(result.error.unwrap().contains("not_relevant"));

    let corpus = separable_corpus();
    let bad = ExperimentConfig { sampling_percent: 1.0, ..config(AlgorithmChoice::Svm) };
    let result = run_experiment(&bad, &corpus, &RecallTargets::default());
    assert_eq!(result.error.as_deref(), Some("down-sampling retained no negative training documents"));
    assert_eq!(result.diagnostics.selected_tokens, 9);
}

#[test]
fn mismatched_prepared_corpus_is_rejected() {
    let prepared = PreparedCorpus::new(&separable_corpus(), true, 1).unwrap();
    let result = run_prepared(&prepared, &config(AlgorithmChoice::Svm), &RecallTargets::default());
    assert!(result.error.unwrap().contains("prepared"));
}

fn fake_row(cfg: ExperimentConfig, reviewed: Vec<f64>) -> ExperimentResult {
    let targets = RecallTargets::DEFAULT[..reviewed.len()].to_vec();
    let average = reviewed.iter().sum::<f64>() / reviewed.len() as f64;
    ExperimentResult {
        config: cfg,
        metrics: Some(CurveMetrics {
            targets,
            precision: reviewed.iter().map(|p| 1000.0 / p).collect(),
            percent_reviewed: reviewed,
            average_percent_reviewed: average,
        }),
        diagnostics: RunDiagnostics::default(),
        error: None,
    }
}

fn random_table(rng: &mut ChaCha8Rng, rows: usize) -> Vec<ExperimentResult> {
    let grid = ParameterGrid {
        stemming: vec![true, false],
        ngram_orders: vec![1, 2],
        value_types: vec![TokenValueType::Binary, TokenValueType::Tfidf],
        token_counts: vec![10, 20],
        sampling_percentages: vec![50.0, 100.0],
        algorithms: AlgorithmChoice::ALL.to_vec(),
        ..ParameterGrid::full()
    };
    let mut configs = enumerate_grid(&grid).unwrap();
    rand::seq::SliceRandom::shuffle(configs.as_mut_slice(), rng);
    configs
        .into_iter()
        .take(rows)
        .map(|c| fake_row(c, (0..3).map(|_| rng.random_range(1.0..100.0)).collect()))
        .collect()
}

#[test]
fn single_value_dimension_aggregates_to_table_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows: Vec<ExperimentResult> = random_table(&mut rng, 40)
        .into_iter()
        .filter(|r| r.config.algorithm == AlgorithmChoice::Svm)
        .collect();
    let report = aggregate_by_parameter(&rows, Dimension::Algorithm).unwrap();
    assert_eq!(report.groups.len(), 1);
    let mean = rows.iter().map(|r| r.metrics.as_ref().unwrap().average_percent_reviewed).sum::<f64>() / rows.len() as f64;
    assert!((report.groups[0].average_percent_reviewed - mean).abs() < 1e-9);
}

#[test]
fn dominating_value_has_lower_mean() {
    let mut rows = Vec::new();
    for k in [10, 20, 30] {
        let base = ExperimentConfig { token_count: k, ..config(AlgorithmChoice::Svm) };
        rows.push(fake_row(ExperimentConfig { algorithm: AlgorithmChoice::LogisticRegression, ..base }, vec![10.0 + k as f64]));
        rows.push(fake_row(base, vec![11.0 + k as f64]));
    }
    let report = aggregate_by_parameter(&rows, Dimension::Algorithm).unwrap();
    assert_eq!(report.groups[0].value, DimensionValue::Algorithm(AlgorithmChoice::Svm));
    assert!(report.groups[1].average_percent_reviewed < report.groups[0].average_percent_reviewed);
}

#[test]
fn sixteen_row_table_matches_hand_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let rows = random_table(&mut rng, 16);
    for dim in Dimension::ALL {
        let report = aggregate_by_parameter(&rows, dim).unwrap();
        assert_eq!(report.groups.iter().map(|g| g.rows).sum::<usize>(), 16);
        for g in &report.groups {
            let members: Vec<&CurveMetrics> = rows
                .iter()
                .filter(|r| format!("{}", r.config.value(dim)) == format!("{}", g.value))
                .map(|r| r.metrics.as_ref().unwrap())
                .collect();
            assert_eq!(members.len(), g.rows);
            for t in 0..3 {
                let mut sum = 0.0;
                for m in &members {
                    sum += m.percent_reviewed[t];
                }
                assert!((g.percent_reviewed[t] - sum / members.len() as f64).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn failed_rows_are_counted_and_excluded() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut rows = random_table(&mut rng, 10);
    rows.push(ExperimentResult::failed(config(AlgorithmChoice::Svm), &crate::Error::NoRelevant));
    let report = aggregate_by_parameter(&rows, Dimension::Sampling).unwrap();
    assert_eq!(report.excluded_failed, 1);
    assert_eq!(report.groups.iter().map(|g| g.rows).sum::<usize>(), 10);
}

#[test]
fn extremes_of_a_single_row() {
    let rows = vec![fake_row(config(AlgorithmChoice::Svm), vec![20.0, 30.0, 40.0])];
    let e = extreme_combinations(&rows, 0.4).unwrap();
    assert_eq!(e.best, e.worst);
    assert_eq!(e.best.percent_reviewed, 30.0);
    assert!(extreme_combinations(&rows, 0.8).is_err());
    assert!(extreme_combinations(&[], 0.3).is_err());
}

#[test]
fn extremes_match_linear_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut rows = random_table(&mut rng, 20);
    // Duplicate a value to exercise the tie rule.
    let copy = rows[3].metrics.clone();
    rows[7].metrics = copy;
    for (t, r) in [0.3, 0.4, 0.5].into_iter().enumerate() {
        let e = extreme_combinations(&rows, r).unwrap();
        let mut sorted: Vec<&ExperimentResult> = rows.iter().collect();
        sorted.sort_by(|a, b| a.config.canonical_cmp(&b.config));
        let value = |row: &ExperimentResult| row.metrics.as_ref().unwrap().percent_reviewed[t];
        let min = sorted.iter().map(|r| value(r)).fold(f64::INFINITY, f64::min);
        let max = sorted.iter().map(|r| value(r)).fold(f64::NEG_INFINITY, f64::max);
        let first_min = sorted.iter().find(|r| value(r) == min).unwrap();
        let first_max = sorted.iter().find(|r| value(r) == max).unwrap();
        assert_eq!(e.best.result, *first_min);
        assert_eq!(e.worst.result, *first_max);
        assert_eq!(e.best.precision, 1000.0 / min);
    }
}

#[test]
fn dominated_row_is_never_best() {
    let rows = vec![
        fake_row(config(AlgorithmChoice::Svm), vec![50.0, 60.0]),
        fake_row(config(AlgorithmChoice::LogisticRegression), vec![40.0, 55.0]),
    ];
    for r in [0.3, 0.4] {
        let e = extreme_combinations(&rows, r).unwrap();
        assert_eq!(e.best.result.config.algorithm, AlgorithmChoice::LogisticRegression);
    }
}

proptest! {
    #[test]
    fn weighted_group_means_equal_table_mean(seed in any::<u64>(), rows in 1usize..=64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng, rows);
        let table_mean = table.iter().map(|r| r.metrics.as_ref().unwrap().average_percent_reviewed).sum::<f64>()
            / table.len() as f64;
        for dim in Dimension::ALL {
            let report = aggregate_by_parameter(&table, dim).unwrap();
            let weighted = report
                .groups
                .iter()
                .map(|g| g.average_percent_reviewed * g.rows as f64)
                .sum::<f64>()
                / table.len() as f64;
            prop_assert!((weighted - table_mean).abs() < 1e-9);
        }
    }
}

#[test]
fn unknown_dimension_name() {
    assert_eq!("colour".parse::<Dimension>(), Err(crate::Error::UnknownDimension(String::from("colour"))));
}
