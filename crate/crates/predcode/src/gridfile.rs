//! Grid files: one `key = value, value, ...` line per dimension.
//!
//! ```text
//! # full grid
//! stemming = yes, no
//! ngrams = 1, 2, 3, 4
//! value_type = binary, frequency, ntf, tfidf
//! tokens = 1000, 3000, 5000
//! sampling = 25, 50, 75, 100
//! algorithm = svm, lr
//! seed = 42
//! ```
//!
//! Optional scalar keys: `seed`, `c`, `tol`, `max_iter`; `recall` lists the
//! recall targets. Omitted dimensions take the full-grid values.

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use predcode_core::evaluation::RecallTargets;
use predcode_core::sweep::{parse_flag, ParameterGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub grid: ParameterGrid,
    pub targets: RecallTargets,
}

fn list<T>(key: &str, value: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).with_context(|| format!("`{key}` value `{s}`")))
        .collect()
}

fn from_str<T: FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| anyhow!("{e}"))
}

fn single<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    from_str(value.trim()).with_context(|| format!("`{key}`"))
}

impl FromStr for GridFile {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut grid = ParameterGrid::full();
        let mut targets = RecallTargets::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = || format!("grid line {}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("expected `key = values`"))
                .with_context(ctx)?;
            let key = key.trim();
            if !seen.insert(key.to_owned()) {
                return Err(anyhow!("duplicate key `{key}`")).with_context(ctx);
            }
            let parsed: Result<()> = (|| {
                match key {
                    "stemming" => grid.stemming = list(key, value, |s| parse_flag("stemming", s).map_err(|e| anyhow!("{e}")))?,
                    "ngrams" => grid.ngram_orders = list(key, value, from_str)?,
                    "value_type" => grid.value_types = list(key, value, from_str)?,
                    "tokens" => grid.token_counts = list(key, value, |s| from_str(&s.replace('_', "")))?,
                    "sampling" => grid.sampling_percentages = list(key, value, |s| from_str(s.trim_end_matches('%')))?,
                    "algorithm" => grid.algorithms = list(key, value, from_str)?,
                    "seed" => grid.seed = single(key, value)?,
                    "c" => grid.c = single(key, value)?,
                    "tol" => grid.tolerance = Some(single(key, value)?),
                    "max_iter" => grid.max_iterations = single(key, value)?,
                    "recall" => {
                        targets = RecallTargets::new(list(key, value, from_str)?).map_err(|e| anyhow!("{e}"))?
                    }
                    other => bail!("unknown key `{other}`"),
                }
                Ok(())
            })();
            parsed.with_context(ctx)?;
        }
        let grid = grid.canonicalize().map_err(|e| anyhow!("{e}"))?;
        Ok(GridFile { grid, targets })
    }
}

impl GridFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read grid {}", path.display()))?;
        text.parse().with_context(|| format!("in grid file {}", path.display()))
    }

    /// Canonical text form; parses back to an equal grid.
    pub fn render(&self) -> String {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
        }
        let g = &self.grid;
        let mut out = String::new();
        let flags: Vec<&str> = g.stemming.iter().map(|&s| if s { "yes" } else { "no" }).collect();
        out += &format!("stemming = {}\n", flags.join(", "));
        out += &format!("ngrams = {}\n", join(&g.ngram_orders));
        out += &format!("value_type = {}\n", join(&g.value_types));
        out += &format!("tokens = {}\n", join(&g.token_counts));
        out += &format!("sampling = {}\n", join(&g.sampling_percentages));
        out += &format!("algorithm = {}\n", join(&g.algorithms));
        out += &format!("seed = {}\n", g.seed);
        out += &format!("c = {}\n", g.c);
        if let Some(t) = g.tolerance {
            out += &format!("tol = {t}\n");
        }
        out += &format!("max_iter = {}\n", g.max_iterations);
        out += &format!("recall = {}\n", join(self.targets.as_slice()));
        out
    }
}
