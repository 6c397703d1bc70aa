use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{Corpus, Label};
use crate::evaluation::{evaluate, CurveMetrics, RankedDocument, RecallTargets, ReviewCurve};
use crate::features::{
    build_vocabulary_with_stats, information_gain, rank_by_information_gain, vectorize_stats,
    ReducedVocabulary, SparseVector, TermStats, Vocabulary,
};
use crate::learners::{score, train, TrainParams};
use crate::sampling::{down_sample_indices, SamplingSpec};
use crate::sweep::ExperimentConfig;
use crate::textprep::preprocess;
use crate::{Error, Result};

/// Everything that depends only on stemming and n-gram order: shared by all
/// downstream configurations.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    stemming: bool,
    ngram_order: usize,
    vocabulary: Vocabulary,
    ranking: Vec<u32>,
    training: Vec<PreparedDocument>,
    training_labels: Vec<Label>,
    validation: Vec<PreparedDocument>,
}

#[derive(Debug, Clone)]
struct PreparedDocument {
    id: String,
    label: Label,
    stats: TermStats,
}

impl PreparedCorpus {
    pub fn new(corpus: &Corpus, stemming: bool, ngram_order: usize) -> Result<Self> {
        corpus.ensure_trainable()?;
        let mut sequences = Vec::new();
        let mut training_labels = Vec::new();
        let mut ids = Vec::new();
        for doc in corpus.training() {
            sequences.push(preprocess(&doc.text, stemming, ngram_order)?);
            training_labels.push(doc.label);
            ids.push(doc.id.clone());
        }
        let (vocabulary, stats) = build_vocabulary_with_stats(&sequences, &training_labels)?;
        drop(sequences);
        let ig = information_gain(&vocabulary);
        let ranking = rank_by_information_gain(&vocabulary, &ig);
        let training = ids
            .into_iter()
            .zip(stats)
            .zip(&training_labels)
            .map(|((id, stats), &label)| PreparedDocument { id, label, stats })
            .collect();
        let validation = corpus
            .validation()
            .map(|doc| {
                let seq = preprocess(&doc.text, stemming, ngram_order)?;
                Ok(PreparedDocument {
                    id: doc.id.clone(),
                    label: doc.label,
                    stats: vocabulary.term_stats(&seq),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedCorpus {
            stemming,
            ngram_order,
            vocabulary,
            ranking,
            training,
            training_labels,
            validation,
        })
    }

    pub fn key(&self) -> (bool, usize) {
        (self.stemming, self.ngram_order)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    /// Vocabulary indices by descending information gain.
    pub fn ranking(&self) -> &[u32] {
        &self.ranking
    }
}

/// Size and solver facts about one run. Fields stay zero when the run failed
/// before reaching them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunDiagnostics {
    pub vocabulary_size: usize,
    pub selected_tokens: usize,
    pub training_documents: usize,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub metrics: Option<CurveMetrics>,
    pub diagnostics: RunDiagnostics,
    pub error: Option<String>,
}

impl ExperimentResult {
    pub fn failed(config: ExperimentConfig, error: &Error) -> Self {
        ExperimentResult {
            config,
            metrics: None,
            diagnostics: RunDiagnostics::default(),
            error: Some(error.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// A trained run together with the ranked validation set.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub model: crate::learners::TrainedModel,
    pub reduced: ReducedVocabulary,
    pub curve: ReviewCurve,
    pub diagnostics: RunDiagnostics,
}

/// Runs one configuration end to end. Failures become rows with `error` set.
pub fn run_experiment(config: &ExperimentConfig, corpus: &Corpus, targets: &RecallTargets) -> ExperimentResult {
    match PreparedCorpus::new(corpus, config.stemming, config.ngram_order) {
        Ok(prepared) => run_prepared(&prepared, config, targets),
        Err(e) => ExperimentResult::failed(*config, &e),
    }
}

/// Runs one configuration on a matching prepared corpus.
pub fn run_prepared(prepared: &PreparedCorpus, config: &ExperimentConfig, targets: &RecallTargets) -> ExperimentResult {
    let mut diagnostics = RunDiagnostics {
        vocabulary_size: prepared.vocabulary.len(),
        ..RunDiagnostics::default()
    };
    match execute(prepared, config, &mut diagnostics) {
        Ok(output) => ExperimentResult {
            config: *config,
            metrics: Some(evaluate(&output.curve, targets)),
            diagnostics,
            error: None,
        },
        Err(e) => ExperimentResult {
            config: *config,
            metrics: None,
            diagnostics,
            error: Some(e.to_string()),
        },
    }
}

/// Like [`run_prepared`] but returns the model and ranking instead of metrics.
pub fn train_and_rank(prepared: &PreparedCorpus, config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut diagnostics = RunDiagnostics {
        vocabulary_size: prepared.vocabulary.len(),
        ..RunDiagnostics::default()
    };
    execute(prepared, config, &mut diagnostics)
}

fn execute(prepared: &PreparedCorpus, config: &ExperimentConfig, diagnostics: &mut RunDiagnostics) -> Result<ExperimentOutput> {
    config.validate()?;
    if prepared.key() != (config.stemming, config.ngram_order) {
        return Err(Error::param(
            "prepared",
            "prepared corpus does not match the configuration's stemming and n-gram order",
        ));
    }
    let vocab = &prepared.vocabulary;
    let reduced = ReducedVocabulary::from_ranking(&prepared.ranking, vocab.len(), config.token_count);
    diagnostics.selected_tokens = reduced.len();

    let spec = SamplingSpec::new(config.sampling_percent, config.seed)?;
    let kept = down_sample_indices(&prepared.training_labels, &spec)?;
    diagnostics.training_documents = kept.len();

    let vectors: Vec<SparseVector> = kept
        .iter()
        .map(|&i| {
            let doc = &prepared.training[i];
            vectorize_stats(&doc.id, &doc.stats, vocab, &reduced, config.value_type)
        })
        .collect();
    let labels: Vec<bool> = kept
        .iter()
        .map(|&i| prepared.training[i].label.is_relevant())
        .collect();
    let params = TrainParams {
        c: config.c,
        tolerance: config.tolerance,
        max_iterations: config.max_iterations,
        seed: config.seed,
    };
    let model = train(&vectors, &labels, reduced.len(), config.algorithm, &params)?;
    diagnostics.iterations = model.diagnostics.iterations;
    diagnostics.converged = model.diagnostics.converged;
    diagnostics.objective = model.diagnostics.objective;

    let ranked = prepared
        .validation
        .iter()
        .map(|doc| {
            let v = vectorize_stats(&doc.id, &doc.stats, vocab, &reduced, config.value_type);
            Ok(RankedDocument {
                doc_id: doc.id.clone(),
                score: score(&model, &v)?,
                relevant: doc.label.is_relevant(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let curve = ReviewCurve::from_scored(ranked)?;
    Ok(ExperimentOutput {
        model,
        reduced,
        curve,
        diagnostics: *diagnostics,
    })
}
