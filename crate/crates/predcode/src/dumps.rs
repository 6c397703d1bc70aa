//! Audit dumps for a single experiment: vocabulary statistics, model weights
//! and the ranked validation curve.

use std::path::Path;

use anyhow::{Context, Result};
use predcode_core::evaluation::ReviewCurve;
use predcode_core::features::{information_gain, ReducedVocabulary, Vocabulary};
use predcode_core::learners::TrainedModel;

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))
}

/// `token,N_t,pos_doc_count,neg_doc_count,ig_bits`, by descending gain.
pub fn write_vocabulary(path: &Path, vocab: &Vocabulary, ranking: &[u32]) -> Result<()> {
    let ig = information_gain(vocab);
    let mut w = writer(path)?;
    w.write_record(["token", "N_t", "pos_doc_count", "neg_doc_count", "ig_bits"])?;
    for &i in ranking {
        let (pos, neg) = vocab.class_doc_counts(i);
        w.write_record([
            vocab.token(i).to_string(),
            vocab.doc_frequency(i).to_string(),
            pos.to_string(),
            neg.to_string(),
            ig[i as usize].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `kind,index,name,value`: the bias, solver diagnostics, then one `weight`
/// row per selected token.
pub fn write_model(path: &Path, model: &TrainedModel, vocab: &Vocabulary, reduced: &ReducedVocabulary) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["kind", "index", "name", "value"])?;
    let d = &model.diagnostics;
    w.write_record(["bias", "", "bias", &model.bias.to_string()])?;
    for (name, value) in [
        ("algorithm", model.algorithm.to_string()),
        ("c", model.c.to_string()),
        ("objective", d.objective.to_string()),
        ("stopping_measure", d.stopping_measure.to_string()),
        ("iterations", d.iterations.to_string()),
        ("converged", d.converged.to_string()),
    ] {
        w.write_record(["diagnostic", "", name, &value])?;
    }
    for (i, weight) in model.weights.iter().enumerate() {
        let token = vocab.token(reduced.full_index(i as u32));
        w.write_record(["weight", &i.to_string(), token, &weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `rank,doc_id,score,label,cum_relevant`, ranks from 1.
pub fn write_curve(path: &Path, curve: &ReviewCurve) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["rank", "doc_id", "score", "label", "cum_relevant"])?;
    for (i, (e, cum)) in curve.entries().iter().zip(curve.cumulative_relevant()).enumerate() {
        let label = if e.relevant { "relevant" } else { "not_relevant" };
        w.write_record([(i + 1).to_string(), e.doc_id.clone(), e.score.to_string(), label.into(), cum.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
