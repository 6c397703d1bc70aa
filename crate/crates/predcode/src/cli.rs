//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use predcode_core::corpus::dataset_stats;
use predcode_core::evaluation::{evaluate, RecallTargets};
use predcode_core::features::TokenValueType;
use predcode_core::learners::{AlgorithmChoice, DEFAULT_C, DEFAULT_MAX_ITERATIONS};
use predcode_core::sweep::{enumerate_grid, parse_flag, train_and_rank, Dimension, ExperimentConfig, ExperimentResult, PreparedCorpus, RunDiagnostics, DEFAULT_SEED};
use predcode_core::synthetic::{generate, SyntheticSpec};

use crate::dataset::{load_dataset, write_dataset, Format};
use crate::gridfile::GridFile;
use crate::manifest::{manifest_path, timing_path, CorpusInfo, RunManifest};
use crate::report::{aggregate_csv, extremes_csv, plot_data_csv, PlotSeries};
use crate::results::{ResultTable, target_label};
use crate::runner::{run_sweep, SweepOptions};

/// Exit status when every experiment succeeded.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid input, IO failures and other fatal errors.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for command-line usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status when the run finished but some experiment rows carry an error.
pub const EXIT_FAILED_ROWS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "predcode", version, about = "Predictive-coding preprocessing experiments: featurize, train, rank and sweep")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the class distribution of a dataset.
    Stats(StatsArgs),
    /// Run a single experiment and print its metrics.
    Run(RunArgs),
    /// Run every configuration of a grid file.
    Sweep(SweepArgs),
    /// Mean metrics per value of one parameter.
    Report(ReportArgs),
    /// Strongest and weakest configuration at one recall level.
    Extremes(ExtremesArgs),
    /// Recall curves per parameter value, for plotting.
    PlotData(PlotArgs),
    /// Write a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct DatasetArg {
    /// Dataset file (.jsonl or .csv).
    pub dataset: PathBuf,
    /// Dataset format; inferred from the extension when omitted.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: DatasetArg,
}

fn parse_yes_no(s: &str) -> Result<bool, String> {
    parse_flag("stemming", s).map_err(|e| e.to_string())
}

fn parse_core<T: std::str::FromStr<Err = predcode_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: predcode_core::Error| e.to_string())
}

fn parse_recall(s: &str) -> Result<RecallTargets, String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("recall `{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    RecallTargets::new(values).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: DatasetArg,
    /// Porter-stem tokens (yes or no).
    #[arg(long, default_value = "no", value_parser = parse_yes_no, action = clap::ArgAction::Set)]
    pub stemming: bool,
    /// Highest n-gram order; grams of order 1 through N are used.
    #[arg(long, default_value_t = 1)]
    pub ngrams: usize,
    /// Token value type: binary, frequency, ntf or tfidf.
    #[arg(long, default_value = "ntf", value_parser = parse_core::<TokenValueType>)]
    pub value_type: TokenValueType,
    /// Number of tokens kept by information gain.
    #[arg(long, default_value_t = 10_000)]
    pub tokens: usize,
    /// Percentage of not-relevant training documents kept.
    #[arg(long, default_value_t = 100.0)]
    pub sampling: f64,
    /// Learner: svm or lr.
    #[arg(long, default_value = "lr", value_parser = parse_core::<AlgorithmChoice>)]
    pub algorithm: AlgorithmChoice,
    /// Seed for down-sampling and the SVM solver.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Loss weight C.
    #[arg(long, default_value_t = DEFAULT_C)]
    pub c: f64,
    /// Stopping tolerance [default: 0.001 for svm, 0.0001 for lr].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solver iteration cap.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
    /// Comma-separated recall targets.
    #[arg(long, default_value = "0.3,0.4,0.5,0.6,0.7,0.8,0.9", value_parser = parse_recall)]
    pub recall: RecallTargets,
    /// Also write the result as a one-row table (with manifest) to this CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the vocabulary statistics to this CSV.
    #[arg(long)]
    pub dump_vocabulary: Option<PathBuf>,
    /// Write the model weights to this CSV.
    #[arg(long)]
    pub dump_model: Option<PathBuf>,
    /// Write the ranked validation curve to this CSV.
    #[arg(long)]
    pub dump_curve: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: DatasetArg,
    /// Grid file with one `key = v1, v2, ...` line per parameter.
    #[arg(long)]
    pub grid: PathBuf,
    /// Result table to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads [default: available CPUs].
    #[arg(long, env = "PREDCODE_WORKERS")]
    pub workers: Option<usize>,
    /// Keep rows already in the output and run only the missing ones.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Result table written by `sweep`.
    pub results: PathBuf,
    /// Parameter to group by: stemming, ngrams, value_type, tokens, sampling or algorithm.
    #[arg(long, value_parser = parse_core::<Dimension>)]
    pub by: Dimension,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtremesArgs {
    pub results: PathBuf,
    /// Recall level; must be one of the table's recall targets.
    #[arg(long, default_value_t = 0.8)]
    pub recall: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["series", "figure"])))]
pub struct PlotArgs {
    pub results: PathBuf,
    /// Curves to emit.
    #[arg(long, value_enum)]
    pub series: Option<PlotSeries>,
    /// Numbered chart: 1 value types, 2 algorithms, 3-5 down-sampling (one
    /// results file per project), 6 strongest and weakest.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    pub figure: Option<u8>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SynthKind {
    /// 2,000 documents, 15% relevant, 20 planted words.
    Planted,
    /// 2,200 documents at 1:10 imbalance with a diffuse topical signal.
    Imbalanced,
    /// Class counts of the first reference project.
    Project1,
    /// Class counts of the third reference project.
    Project3,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output dataset (.jsonl or .csv).
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = SynthKind::Planted)]
    pub kind: SynthKind,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Parses `args` (program name first) and runs the command.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}

/// Runs one command, writing its primary output to `out`.
pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Stats(a) => stats(a, out),
        Command::Run(a) => run(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Report(a) => {
            let table = ResultTable::read(&a.results)?;
            emit(out, a.out.as_deref(), &aggregate_csv(&table, a.by)?)
        }
        Command::Extremes(a) => {
            let table = ResultTable::read(&a.results)?;
            emit(out, a.out.as_deref(), &extremes_csv(&table, a.recall)?)
        }
        Command::PlotData(a) => {
            let table = ResultTable::read(&a.results)?;
            let series = match (a.series, a.figure) {
                (Some(s), _) => s,
                (None, Some(1)) => PlotSeries::ValueType,
                (None, Some(2)) => PlotSeries::Algorithm,
                (None, Some(3..=5)) => PlotSeries::Sampling,
                _ => PlotSeries::Extremes,
            };
            emit(out, a.out.as_deref(), &plot_data_csv(&table, series)?)
        }
        Command::Synth(a) => synth(a, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<i32> {
    match path {
        Some(p) => crate::results::write_text(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<i32> {
    let corpus = load_dataset(&a.input.dataset, a.input.format)?;
    let d = dataset_stats(&corpus);
    writeln!(out, "dataset: {}", corpus.name())?;
    writeln!(out, "training relevant: {}", d.training_relevant)?;
    writeln!(out, "training not relevant: {}", d.training_not_relevant)?;
    writeln!(out, "validation relevant: {}", d.validation_relevant)?;
    writeln!(out, "validation not relevant: {}", d.validation_not_relevant)?;
    writeln!(out, "total: {}", d.total())?;
    Ok(EXIT_OK)
}

fn run(a: RunArgs, out: &mut dyn Write) -> Result<i32> {
    let corpus = load_dataset(&a.input.dataset, a.input.format)?;
    let config = ExperimentConfig {
        stemming: a.stemming,
        ngram_order: a.ngrams,
        value_type: a.value_type,
        token_count: a.tokens,
        sampling_percent: a.sampling,
        algorithm: a.algorithm,
        seed: a.seed,
        c: a.c,
        tolerance: a.tol.unwrap_or_else(|| a.algorithm.default_tolerance()),
        max_iterations: a.max_iter,
    };
    config.validate().map_err(|e| anyhow!("{e}"))?;
    let mut result = ExperimentResult {
        config,
        metrics: None,
        diagnostics: RunDiagnostics::default(),
        error: None,
    };
    match PreparedCorpus::new(&corpus, config.stemming, config.ngram_order) {
        Err(e) => result.error = Some(e.to_string()),
        Ok(prepared) => {
            result.diagnostics.vocabulary_size = prepared.vocabulary().len();
            if let Some(p) = &a.dump_vocabulary {
                crate::dumps::write_vocabulary(p, prepared.vocabulary(), prepared.ranking())?;
            }
            match train_and_rank(&prepared, &config) {
                Err(e) => result.error = Some(e.to_string()),
                Ok(output) => {
                    if let Some(p) = &a.dump_model {
                        crate::dumps::write_model(p, &output.model, prepared.vocabulary(), &output.reduced)?;
                    }
                    if let Some(p) = &a.dump_curve {
                        crate::dumps::write_curve(p, &output.curve)?;
                    }
                    result.diagnostics = output.diagnostics;
                    result.metrics = Some(evaluate(&output.curve, &a.recall));
                }
            }
        }
    }
    print_result(out, &result)?;
    if let Some(path) = &a.out {
        let table = ResultTable {
            targets: a.recall.as_slice().to_vec(),
            rows: vec![result.clone()],
        };
        table.write(path)?;
        let info = CorpusInfo::new(&a.input.dataset, &corpus)?;
        let params = crate::results::config_fields(&config).join(",");
        RunManifest::new("run", info, params, a.recall.as_slice(), config.seed, 1).write(&manifest_path(path))?;
    }
    Ok(if result.error.is_some() { EXIT_FAILED_ROWS } else { EXIT_OK })
}

fn print_result(out: &mut dyn Write, r: &ExperimentResult) -> Result<()> {
    let c = &r.config;
    writeln!(
        out,
        "config: stemming={} ngrams={} value_type={} tokens={} sampling={} algorithm={} seed={} c={} tol={} max_iter={}",
        if c.stemming { "yes" } else { "no" },
        c.ngram_order,
        c.value_type,
        c.token_count,
        c.sampling_percent,
        c.algorithm,
        c.seed,
        c.c,
        c.tolerance,
        c.max_iterations
    )?;
    let d = &r.diagnostics;
    writeln!(
        out,
        "diagnostics: vocabulary={} selected={} training_documents={} iterations={} converged={} objective={}",
        d.vocabulary_size, d.selected_tokens, d.training_documents, d.iterations, d.converged, d.objective
    )?;
    if let Some(e) = &r.error {
        writeln!(out, "error: {e}")?;
    }
    if let Some(m) = &r.metrics {
        writeln!(out, "recall,percent_reviewed,precision")?;
        for (i, &t) in m.targets.iter().enumerate() {
            writeln!(out, "{},{:.4},{:.4}", target_label(t), m.percent_reviewed[i], m.precision[i])?;
        }
        writeln!(out, "average percent reviewed: {:.4}", m.average_percent_reviewed)?;
    }
    Ok(())
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let corpus = load_dataset(&a.input.dataset, a.input.format)?;
    let grid_file = GridFile::load(&a.grid)?;
    let configs = enumerate_grid(&grid_file.grid).map_err(|e| anyhow!("{e}"))?;
    let workers = match a.workers {
        Some(0) => return Err(anyhow!("invalid parameter `workers`: must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let manifest = RunManifest::new(
        "sweep",
        CorpusInfo::new(&a.input.dataset, &corpus)?,
        grid_file.render(),
        grid_file.targets.as_slice(),
        grid_file.grid.seed,
        configs.len(),
    );
    let mpath = manifest_path(&a.out);
    if a.resume && a.out.exists() && mpath.exists() {
        let previous = RunManifest::read(&mpath)?;
        if previous != manifest {
            return Err(anyhow!(
                "cannot resume {}: its manifest differs (dataset, grid or tool version changed)",
                a.out.display()
            ));
        }
    }
    manifest.write(&mpath)?;
    log::info!("{} configurations, {} workers", configs.len(), workers);
    let summary = run_sweep(
        &corpus,
        &configs,
        &grid_file.targets,
        &a.out,
        &SweepOptions {
            workers,
            resume: a.resume,
        },
        Some(&timing_path(&a.out)),
    )
    .with_context(|| format!("sweep into {}", a.out.display()))?;
    writeln!(
        out,
        "{} configurations: {} run, {} resumed, {} failed",
        summary.total, summary.executed, summary.resumed, summary.failed
    )?;
    Ok(if summary.failed > 0 { EXIT_FAILED_ROWS } else { EXIT_OK })
}

fn synth(a: SynthArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = match a.kind {
        SynthKind::Planted => SyntheticSpec::planted_signal(a.seed),
        SynthKind::Imbalanced => SyntheticSpec::imbalanced_topical(a.seed),
        SynthKind::Project1 => SyntheticSpec::project_one(a.seed),
        SynthKind::Project3 => SyntheticSpec::project_three(a.seed),
    };
    let corpus = generate(&spec).map_err(|e| anyhow!("{e}"))?;
    write_dataset(&corpus, &a.out, Format::from_path(&a.out))
        .with_context(|| format!("cannot write {}", a.out.display()))?;
    writeln!(out, "wrote {} documents to {}", corpus.len(), a.out.display())?;
    Ok(EXIT_OK)
}
