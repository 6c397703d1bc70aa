use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use predcode::dataset::{write_dataset, Format};
use predcode_core::corpus::{Corpus, Document, Label, Split};
use predcode_core::synthetic::{generate, SyntheticSpec};

fn predcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predcode"))
        .args(args)
        .env("RUST_LOG", "error")
        .env_remove("PREDCODE_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn small_corpus(dir: &Path) -> PathBuf {
    let spec = SyntheticSpec {
        counts: predcode_core::corpus::ClassDistribution {
            training_relevant: 40,
            training_not_relevant: 160,
            validation_relevant: 20,
            validation_not_relevant: 80,
        },
        ..SyntheticSpec::planted_signal(7)
    };
    let path = dir.join("small.jsonl");
    write_dataset(&generate(&spec).unwrap(), &path, Format::Jsonl).unwrap();
    path
}

const GRID: &str = "stemming = yes, no\nngrams = 1, 2\nvalue_type = binary, ntf\ntokens = 50, 500\nsampling = 50, 100\nalgorithm = svm, lr\n";

#[test]
fn stats_reports_class_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p1.csv");
    let corpus = generate(&SyntheticSpec::project_one(3)).unwrap();
    write_dataset(&corpus, &path, Format::Csv).unwrap();
    let out = predcode(&["stats", p(&path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    for line in [
        "training relevant: 1126",
        "training not relevant: 2897",
        "validation relevant: 206",
        "validation not relevant: 1368",
        "total: 5597",
    ] {
        assert!(text.contains(line), "missing `{line}` in\n{text}");
    }
}

#[test]
fn run_prints_every_recall_target() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_corpus(dir.path());
    let curve = dir.path().join("curve.csv");
    let out = predcode(&["run", p(&data), "--tokens", "200", "--dump-curve", p(&curve)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("recall,"))
        .skip(1)
        .take_while(|l| !l.starts_with("average"))
        .collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("30,") && rows[6].starts_with("90,"));
    assert!(text.contains("algorithm=lr") && text.contains("value_type=ntf"));
    let curve_text = std::fs::read_to_string(curve).unwrap();
    assert_eq!(curve_text.lines().count(), 1 + 100);
}

#[test]
fn stemming_takes_a_value() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_corpus(dir.path());
    let out = predcode(&["run", p(&data), "--stemming", "yes", "--ngrams", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("stemming=yes ngrams=2"));
    let out = predcode(&["run", p(&data), "--stemming", "maybe"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_with_out_writes_a_single_row_table() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_corpus(dir.path());
    let table = dir.path().join("one.csv");
    let out = predcode(&["run", p(&data), "--algorithm", "svm", "--out", p(&table)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&table).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("no,1,ntf,10000,100,svm,42,1,0.001,1000,"));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = predcode(&["run", "x.jsonl", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = predcode(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = predcode(&["run", "x.jsonl", "--value-type", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_parameter_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_corpus(dir.path());
    let out = predcode(&["run", p(&data), "--ngrams", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`ngrams`"), "{}", stderr(&out));
    let out = predcode(&["run", p(&data), "--sampling", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sampling"), "{}", stderr(&out));
}

#[test]
fn missing_dataset_is_fatal() {
    let out = predcode(&["stats", "/nonexistent/data.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("data.jsonl"));
}

#[test]
fn help_lists_defaults() {
    let out = predcode(&["run", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for default in [
        "[default: no]",
        "[default: 1]",
        "[default: ntf]",
        "[default: 10000]",
        "[default: 100]",
        "[default: lr]",
        "[default: 42]",
        "[default: 1000]",
        "[default: 0.3,0.4,0.5,0.6,0.7,0.8,0.9]",
    ] {
        assert!(text.contains(default), "missing {default} in\n{text}");
    }
    for sub in ["stats", "run", "sweep", "report", "extremes", "plot-data", "synth"] {
        assert!(stdout(&predcode(&["--help"])).contains(sub));
    }
}

#[test]
fn sweep_output_is_independent_of_workers_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_corpus(dir.path());
    let grid = dir.path().join("grid.txt");
    std::fs::write(&grid, GRID).unwrap();

    let one = dir.path().join("one.csv");
    let four = dir.path().join("four.csv");
    for (out, workers) in [(&one, "1"), (&four, "4")] {
        let o = predcode(&["sweep", p(&data), "--grid", p(&grid), "--out", p(out), "--workers", workers]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = std::fs::read(&one).unwrap();
    assert_eq!(a, std::fs::read(&four).unwrap());
    assert_eq!(String::from_utf8_lossy(&a).lines().count(), 1 + 64);
    assert_eq!(
        std::fs::read(dir.path().join("one.csv.manifest.json")).unwrap(),
        std::fs::read(dir.path().join("four.csv.manifest.json")).unwrap()
    );

    // Keep the header, ten rows and half of the eleventh, as after a crash.
    let text = String::from_utf8(a.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut partial = lines[..11].join("\n");
    partial.push('\n');
    partial.push_str(&lines[11][..lines[11].len() / 2]);
    let resumed = dir.path().join("resumed.csv");
    std::fs::write(&resumed, partial).unwrap();
    std::fs::copy(dir.path().join("one.csv.manifest.json"), dir.path().join("resumed.csv.manifest.json")).unwrap();
    let o = predcode(&["sweep", p(&data), "--grid", p(&grid), "--out", p(&resumed), "--workers", "2", "--resume"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("54 run, 10 resumed"), "{}", stdout(&o));
    assert_eq!(std::fs::read(&resumed).unwrap(), a);

    let report = predcode(&["report", p(&one), "--by", "sampling"]);
    assert_eq!(report.status.code(), Some(0));
    let r = stdout(&report);
    assert!(r.lines().nth(1).unwrap().starts_with("50,32,"));
    assert!(r.lines().nth(2).unwrap().starts_with("100,32,"));
    let ex = predcode(&["extremes", p(&one), "--recall", "0.8"]);
    assert_eq!(ex.status.code(), Some(0));
    assert!(stdout(&ex).starts_with("Parameter Type,Strongest,Weakest"));
    let fig = predcode(&["plot-data", p(&one), "--series", "value-type"]);
    assert_eq!(stdout(&fig).lines().count(), 1 + 2 * 7);
    let numbered = predcode(&["plot-data", p(&one), "--figure", "1"]);
    assert_eq!(stdout(&numbered), stdout(&fig));
    let both = predcode(&["plot-data", p(&one), "--figure", "1", "--series", "sampling"]);
    assert_eq!(both.status.code(), Some(2));
    let neither = predcode(&["plot-data", p(&one)]);
    assert_eq!(neither.status.code(), Some(2));
    let seven = predcode(&["plot-data", p(&one), "--figure", "7"]);
    assert_eq!(seven.status.code(), Some(2));
}

#[test]
fn resume_refuses_a_different_grid() {
    let dir = tempfile::tempdir().unwrap();
    let data = small_corpus(dir.path());
    let grid = dir.path().join("grid.txt");
    std::fs::write(&grid, "stemming = no\nngrams = 1\nvalue_type = binary\ntokens = 50\nsampling = 100\nalgorithm = lr\n").unwrap();
    let out = dir.path().join("r.csv");
    let o = predcode(&["sweep", p(&data), "--grid", p(&grid), "--out", p(&out), "--workers", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::write(&grid, "stemming = no\nngrams = 1\nvalue_type = binary\ntokens = 60\nsampling = 100\nalgorithm = lr\n").unwrap();
    let o = predcode(&["sweep", p(&data), "--grid", p(&grid), "--out", p(&out), "--resume"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn failed_rows_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // Two negatives at 25% keep none, so that row fails.
    let docs = vec![
        Document::new("a", "alpha beta", Label::Relevant, Split::Training),
        Document::new("b", "gamma delta", Label::NotRelevant, Split::Training),
        Document::new("c", "gamma", Label::NotRelevant, Split::Training),
        Document::new("d", "alpha", Label::Relevant, Split::Validation),
        Document::new("e", "delta", Label::NotRelevant, Split::Validation),
    ];
    let data = dir.path().join("tiny.jsonl");
    write_dataset(&Corpus::new("tiny", docs).unwrap(), &data, Format::Jsonl).unwrap();
    let grid = dir.path().join("grid.txt");
    std::fs::write(&grid, "stemming = no\nngrams = 1\nvalue_type = binary\ntokens = 10\nsampling = 25, 100\nalgorithm = lr\n").unwrap();
    let out = dir.path().join("r.csv");
    let o = predcode(&["sweep", p(&data), "--grid", p(&grid), "--out", p(&out), "--workers", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().contains("retained no negative"));
    assert!(text.lines().nth(2).unwrap().ends_with(','));
}

#[test]
fn synth_writes_requested_kind() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("imb.csv");
    let o = predcode(&["synth", p(&path), "--kind", "imbalanced", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stats = stdout(&predcode(&["stats", p(&path)]));
    assert!(stats.contains("training relevant: 150"));
    assert!(stats.contains("training not relevant: 1500"));
}
