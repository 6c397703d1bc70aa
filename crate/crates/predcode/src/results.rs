//! Result table CSV: one row per configuration.
//!
//! Columns: every configuration field, `reviewed_at_<pct>` and
//! `precision_at_<pct>` for each recall target, `avg_percent_reviewed`, the
//! run diagnostics and `error`. Metric cells are empty on failed rows. Floats
//! use the shortest representation that parses back to the same value, so a
//! table survives a write/read cycle exactly.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use predcode_core::evaluation::{CurveMetrics, RecallTargets};
use predcode_core::sweep::{parse_flag, ExperimentConfig, ExperimentResult, RunDiagnostics};

const CONFIG_COLUMNS: [&str; 10] = [
    "stemming",
    "ngrams",
    "value_type",
    "tokens",
    "sampling",
    "algorithm",
    "seed",
    "c",
    "tolerance",
    "max_iterations",
];
const DIAGNOSTIC_COLUMNS: [&str; 6] = [
    "vocabulary_size",
    "selected_tokens",
    "training_documents",
    "iterations",
    "converged",
    "objective",
];

/// `0.3` → `"30"`, `0.925` → `"92.5"`.
pub fn target_label(r: f64) -> String {
    let pct = (r * 100.0 * 1e6).round() / 1e6;
    format!("{pct}")
}

pub fn header(targets: &[f64]) -> Vec<String> {
    let mut h: Vec<String> = CONFIG_COLUMNS.iter().map(|s| s.to_string()).collect();
    h.extend(targets.iter().map(|&r| format!("reviewed_at_{}", target_label(r))));
    h.extend(targets.iter().map(|&r| format!("precision_at_{}", target_label(r))));
    h.push("avg_percent_reviewed".into());
    h.extend(DIAGNOSTIC_COLUMNS.iter().map(|s| s.to_string()));
    h.push("error".into());
    h
}

pub fn config_fields(c: &ExperimentConfig) -> Vec<String> {
    vec![
        if c.stemming { "yes" } else { "no" }.to_string(),
        c.ngram_order.to_string(),
        c.value_type.to_string(),
        c.token_count.to_string(),
        c.sampling_percent.to_string(),
        c.algorithm.to_string(),
        c.seed.to_string(),
        c.c.to_string(),
        c.tolerance.to_string(),
        c.max_iterations.to_string(),
    ]
}

fn record(row: &ExperimentResult, targets: &[f64]) -> Vec<String> {
    let mut out = config_fields(&row.config);
    match &row.metrics {
        Some(m) => {
            out.extend(m.percent_reviewed.iter().map(f64::to_string));
            out.extend(m.precision.iter().map(f64::to_string));
            out.push(m.average_percent_reviewed.to_string());
        }
        None => out.extend(std::iter::repeat_n(String::new(), 2 * targets.len() + 1)),
    }
    let d = &row.diagnostics;
    out.extend([
        d.vocabulary_size.to_string(),
        d.selected_tokens.to_string(),
        d.training_documents.to_string(),
        d.iterations.to_string(),
        d.converged.to_string(),
        d.objective.to_string(),
        row.error.clone().unwrap_or_default(),
    ]);
    out
}

/// All rows of a result file and the recall targets named in its header.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub targets: Vec<f64>,
    pub rows: Vec<ExperimentResult>,
}

impl ResultTable {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = ResultWriter::create(path, &self.targets)?;
        for row in &self.rows {
            w.write(row)?;
        }
        w.finish()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .with_context(|| format!("cannot read results {}", path.display()))?;
        parse(&text).with_context(|| format!("in results file {}", path.display()))
    }

    /// Reads a file that may end in a partially written row, which is
    /// dropped. Returns the table and the byte length of the intact prefix.
    pub fn read_intact_prefix(path: &Path) -> Result<(Self, u64)> {
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .with_context(|| format!("cannot read results {}", path.display()))?;
        let mut end = text.len();
        // A torn row either misses its newline or fails to parse.
        if !text.ends_with('\n') {
            end = text.rfind('\n').map_or(0, |i| i + 1);
        }
        loop {
            match parse(&text[..end]) {
                Ok(table) => return Ok((table, end as u64)),
                Err(e) if end > 0 => {
                    let prev = text[..end - 1].rfind('\n').map_or(0, |i| i + 1);
                    log::warn!("dropping unreadable trailing row of {}: {e:#}", path.display());
                    if prev == 0 {
                        bail!("results file {} has no readable header", path.display());
                    }
                    end = prev;
                }
                Err(e) => return Err(e),
            }
        }
    }
}

fn parse_target(column: &str) -> Result<f64> {
    let pct = column
        .strip_prefix("reviewed_at_")
        .ok_or_else(|| anyhow!("unexpected column `{column}`"))?;
    let pct: f64 = pct.parse().with_context(|| format!("bad recall target column `{column}`"))?;
    Ok(pct / 100.0)
}

fn parse(text: &str) -> Result<ResultTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let head: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if head.len() < CONFIG_COLUMNS.len() + 1 + DIAGNOSTIC_COLUMNS.len() + 1 {
        bail!("header has too few columns");
    }
    let nt = (head.len() - CONFIG_COLUMNS.len() - 1 - DIAGNOSTIC_COLUMNS.len() - 1) / 2;
    let targets = head[CONFIG_COLUMNS.len()..CONFIG_COLUMNS.len() + nt]
        .iter()
        .map(|c| parse_target(c))
        .collect::<Result<Vec<_>>>()?;
    if head != header(&targets) {
        bail!("unexpected header {head:?}");
    }
    let recall_targets = RecallTargets::new(targets.clone()).map_err(|e| anyhow!("{e}"))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        rows.push(parse_row(&rec, recall_targets.as_slice()).with_context(|| format!("row {}", i + 1))?);
    }
    Ok(ResultTable { targets, rows })
}

fn field<T: FromStr>(rec: &csv::StringRecord, i: usize, name: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let s = rec.get(i).ok_or_else(|| anyhow!("missing column `{name}`"))?;
    s.parse::<T>().map_err(|e| anyhow!("column `{name}`: cannot parse `{s}`: {e}"))
}

fn parse_row(rec: &csv::StringRecord, targets: &[f64]) -> Result<ExperimentResult> {
    let stemming = parse_flag("stemming", rec.get(0).unwrap_or_default()).map_err(|e| anyhow!("{e}"))?;
    let config = ExperimentConfig {
        stemming,
        ngram_order: field(rec, 1, "ngrams")?,
        value_type: field(rec, 2, "value_type")?,
        token_count: field(rec, 3, "tokens")?,
        sampling_percent: field(rec, 4, "sampling")?,
        algorithm: field(rec, 5, "algorithm")?,
        seed: field(rec, 6, "seed")?,
        c: field(rec, 7, "c")?,
        tolerance: field(rec, 8, "tolerance")?,
        max_iterations: field(rec, 9, "max_iterations")?,
    };
    let nt = targets.len();
    let base = CONFIG_COLUMNS.len();
    let error_col = base + 2 * nt + 1 + DIAGNOSTIC_COLUMNS.len();
    let error = rec.get(error_col).filter(|s| !s.is_empty()).map(String::from);
    let metrics = if error.is_some() {
        None
    } else {
        let floats = |from: usize| -> Result<Vec<f64>> {
            (from..from + nt).map(|i| field(rec, i, "metric")).collect()
        };
        Some(CurveMetrics {
            targets: targets.to_vec(),
            percent_reviewed: floats(base)?,
            precision: floats(base + nt)?,
            average_percent_reviewed: field(rec, base + 2 * nt, "avg_percent_reviewed")?,
        })
    };
    let d = base + 2 * nt + 1;
    let diagnostics = RunDiagnostics {
        vocabulary_size: field(rec, d, "vocabulary_size")?,
        selected_tokens: field(rec, d + 1, "selected_tokens")?,
        training_documents: field(rec, d + 2, "training_documents")?,
        iterations: field(rec, d + 3, "iterations")?,
        converged: field(rec, d + 4, "converged")?,
        objective: field(rec, d + 5, "objective")?,
    };
    Ok(ExperimentResult {
        config,
        metrics,
        diagnostics,
        error,
    })
}

/// Appends rows one at a time, flushing after each so a crash loses at most
/// the row being written.
pub struct ResultWriter {
    writer: csv::Writer<BufWriter<File>>,
    targets: Vec<f64>,
}

impl ResultWriter {
    pub fn create(path: &Path, targets: &[f64]) -> Result<Self> {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut writer = csv::Writer::from_writer(BufWriter::new(file));
        writer.write_record(header(targets))?;
        writer.flush()?;
        Ok(ResultWriter {
            writer,
            targets: targets.to_vec(),
        })
    }

    /// Continues a file whose first `keep` bytes are intact rows.
    pub fn append(path: &Path, targets: &[f64], keep: u64) -> Result<Self> {
        let file = OpenOptions::new()
            .write(true)
            .open(path)
            .with_context(|| format!("cannot open {}", path.display()))?;
        file.set_len(keep)?;
        let mut file = file;
        std::io::Seek::seek(&mut file, std::io::SeekFrom::End(0))?;
        Ok(ResultWriter {
            writer: csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(BufWriter::new(file)),
            targets: targets.to_vec(),
        })
    }

    pub fn write(&mut self, row: &ExperimentResult) -> Result<()> {
        self.writer.write_record(record(row, &self.targets))?;
        self.writer.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        let inner = self.writer.into_inner().map_err(|e| anyhow!("{e}"))?;
        let file = inner.into_inner().map_err(|e| anyhow!("{e}"))?;
        file.sync_all()?;
        Ok(())
    }
}

/// Writes `table` to `path` atomically via a sibling temporary file.
pub fn replace_atomically(table: &ResultTable, path: &Path) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    table.write(&tmp)?;
    std::fs::rename(&tmp, path).with_context(|| format!("cannot replace {}", path.display()))?;
    Ok(())
}

/// Writes `text` followed by a newline if it is not already terminated.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    f.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        f.write_all(b"\n")?;
    }
    Ok(())
}
