//! Parallel, resumable sweep execution.
//!
//! Workers claim configurations from a shared counter and send results to the
//! calling thread, which is the only writer: it appends each row to the output
//! as it arrives. When every configuration has a row the file is rewritten in
//! canonical configuration order, so the final table does not depend on
//! worker count or completion order. A resumed sweep keeps the rows already
//! on disk (dropping a torn final line) and runs only the missing ones.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use predcode_core::corpus::Corpus;
use predcode_core::evaluation::RecallTargets;
use predcode_core::sweep::{run_prepared, ExperimentConfig, ExperimentResult, PreparedCorpus, RunDiagnostics};

use crate::results::{config_fields, replace_atomically, ResultTable, ResultWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub workers: usize,
    pub resume: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSummary {
    pub total: usize,
    pub executed: usize,
    pub resumed: usize,
    pub failed: usize,
}

type PrepKey = (bool, usize);
type Prepared = Arc<OnceLock<Result<Arc<PreparedCorpus>, String>>>;

/// Prepared corpora shared by workers, dropped once no pending configuration
/// needs them.
struct PrepCache<'a> {
    corpus: &'a Corpus,
    slots: Mutex<HashMap<PrepKey, (Prepared, usize)>>,
}

impl<'a> PrepCache<'a> {
    fn new(corpus: &'a Corpus, pending: &[ExperimentConfig]) -> Self {
        let mut slots: HashMap<PrepKey, (Prepared, usize)> = HashMap::new();
        for c in pending {
            slots.entry((c.stemming, c.ngram_order)).or_default().1 += 1;
        }
        PrepCache {
            corpus,
            slots: Mutex::new(slots),
        }
    }

    fn get(&self, key: PrepKey) -> Result<Arc<PreparedCorpus>, String> {
        let cell = {
            let slots = self.slots.lock().expect("cache lock");
            Arc::clone(&slots.get(&key).expect("every pending key has a slot").0)
        };
        cell.get_or_init(|| {
            log::debug!("preparing corpus for stemming={} ngrams={}", key.0, key.1);
            PreparedCorpus::new(self.corpus, key.0, key.1)
                .map(Arc::new)
                .map_err(|e| e.to_string())
        })
        .clone()
    }

    fn release(&self, key: PrepKey) {
        let mut slots = self.slots.lock().expect("cache lock");
        if let Some(slot) = slots.get_mut(&key) {
            slot.1 -= 1;
            if slot.1 == 0 {
                slots.remove(&key);
            }
        }
    }
}

fn run_one(cache: &PrepCache, config: &ExperimentConfig, targets: &RecallTargets) -> ExperimentResult {
    let key = (config.stemming, config.ngram_order);
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| match cache.get(key) {
        Ok(prepared) => run_prepared(&prepared, config, targets),
        Err(message) => failed(*config, message),
    }));
    cache.release(key);
    outcome.unwrap_or_else(|panic| {
        let message = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        failed(*config, format!("internal error: {message}"))
    })
}

fn failed(config: ExperimentConfig, message: String) -> ExperimentResult {
    ExperimentResult {
        config,
        metrics: None,
        diagnostics: RunDiagnostics::default(),
        error: Some(message),
    }
}

/// Runs `configs` over `corpus`, writing the result table to `out`. Per-row
/// wall times go to `timing` when given.
pub fn run_sweep(
    corpus: &Corpus,
    configs: &[ExperimentConfig],
    targets: &RecallTargets,
    out: &Path,
    options: &SweepOptions,
    timing: Option<&Path>,
) -> Result<SweepSummary> {
    let wanted: HashSet<Vec<String>> = configs.iter().map(config_fields).collect();
    if wanted.len() != configs.len() {
        bail!("configuration list contains duplicates");
    }

    let (mut rows, mut writer) = if options.resume && out.exists() {
        let (table, keep) = ResultTable::read_intact_prefix(out)?;
        if table.targets != targets.as_slice() {
            bail!(
                "cannot resume {}: it was evaluated at recall targets {:?}, not {:?}",
                out.display(),
                table.targets,
                targets.as_slice()
            );
        }
        let mut seen = HashSet::new();
        let mut rows = Vec::with_capacity(table.rows.len());
        for row in table.rows {
            let key = config_fields(&row.config);
            if !wanted.contains(&key) {
                bail!("cannot resume {}: it holds a row outside the grid ({})", out.display(), key.join(","));
            }
            if seen.insert(key) {
                rows.push(row);
            }
        }
        log::info!("resuming {}: {} of {} rows present", out.display(), rows.len(), configs.len());
        let writer = ResultWriter::append(out, targets.as_slice(), keep)?;
        (rows, writer)
    } else {
        (Vec::new(), ResultWriter::create(out, targets.as_slice())?)
    };
    let resumed = rows.len();

    let done: HashSet<Vec<String>> = rows.iter().map(|r| config_fields(&r.config)).collect();
    let pending: Vec<ExperimentConfig> = configs
        .iter()
        .filter(|c| !done.contains(&config_fields(c)))
        .copied()
        .collect();

    let mut timing_writer = match timing {
        Some(path) => Some(TimingWriter::open(path)?),
        None => None,
    };

    let workers = options.workers.clamp(1, pending.len().max(1));
    let cache = PrepCache::new(corpus, &pending);
    let next = AtomicUsize::new(0);
    let started = Instant::now();
    let mut last_log = Instant::now();
    std::thread::scope(|scope| -> Result<()> {
        let (tx, rx) = mpsc::channel::<(ExperimentResult, Duration)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (cache, next, pending) = (&cache, &next, &pending);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(config) = pending.get(i) else { break };
                let t = Instant::now();
                let row = run_one(cache, config, targets);
                if tx.send((row, t.elapsed())).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (count, (row, elapsed)) in rx.into_iter().enumerate() {
            writer.write(&row)?;
            if let Some(t) = timing_writer.as_mut() {
                t.write(&row.config, elapsed)?;
            }
            if let Some(e) = &row.error {
                log::warn!("experiment {} failed: {e}", config_fields(&row.config).join(","));
            }
            rows.push(row);
            if last_log.elapsed() >= Duration::from_secs(10) || count + 1 == pending.len() {
                log::info!(
                    "{}/{} experiments done ({:.0?} elapsed)",
                    resumed + count + 1,
                    configs.len(),
                    started.elapsed()
                );
                last_log = Instant::now();
            }
        }
        Ok(())
    })?;
    writer.finish()?;

    if rows.len() != configs.len() {
        bail!("sweep produced {} rows for {} configurations", rows.len(), configs.len());
    }
    rows.sort_by(|a, b| a.config.canonical_cmp(&b.config));
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    replace_atomically(
        &ResultTable {
            targets: targets.as_slice().to_vec(),
            rows,
        },
        out,
    )
    .context("cannot write the final result table")?;
    Ok(SweepSummary {
        total: configs.len(),
        executed: pending.len(),
        resumed,
        failed,
    })
}

/// Wall time per experiment in completion order.
struct TimingWriter(csv::Writer<std::fs::File>);

impl TimingWriter {
    fn open(path: &Path) -> Result<Self> {
        let exists = path.exists();
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("cannot open {}", path.display()))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        if !exists {
            let mut head: Vec<String> = crate::results::header(&[])[..10].to_vec();
            head.push("wall_ms".into());
            w.write_record(head)?;
        }
        Ok(TimingWriter(w))
    }

    fn write(&mut self, config: &ExperimentConfig, elapsed: Duration) -> Result<()> {
        let mut rec = config_fields(config);
        rec.push(format!("{:.3}", elapsed.as_secs_f64() * 1000.0));
        self.0.write_record(rec)?;
        self.0.flush()?;
        Ok(())
    }
}
