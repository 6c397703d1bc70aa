use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::evaluation::CurveMetrics;
use crate::sweep::{Dimension, DimensionValue, ExperimentResult};
use crate::{Error, Result};

/// Mean metrics over every successful row sharing one dimension value.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterAggregate {
    pub value: DimensionValue,
    pub rows: usize,
    pub average_percent_reviewed: f64,
    pub percent_reviewed: Vec<f64>,
    pub precision: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub dimension: Dimension,
    pub targets: Vec<f64>,
    pub groups: Vec<ParameterAggregate>,
    /// Rows left out because the experiment failed.
    pub excluded_failed: usize,
}

fn successful_sorted(rows: &[ExperimentResult]) -> (Vec<&ExperimentResult>, usize) {
    let mut ok: Vec<&ExperimentResult> = rows.iter().filter(|r| r.metrics.is_some()).collect();
    ok.sort_by(|a, b| a.config.canonical_cmp(&b.config));
    let failed = rows.len() - ok.len();
    (ok, failed)
}

fn common_targets(rows: &[&ExperimentResult]) -> Result<Vec<f64>> {
    let Some(first) = rows.first() else {
        return Ok(Vec::new());
    };
    let targets = first.metrics.as_ref().map(|m| m.targets.clone()).unwrap_or_default();
    if rows
        .iter()
        .any(|r| r.metrics.as_ref().map(|m| &m.targets) != Some(&targets))
    {
        return Err(Error::param("results", "rows were evaluated at different recall targets"));
    }
    Ok(targets)
}

/// Per-value means for one dimension, values in canonical order.
pub fn aggregate_by_parameter(rows: &[ExperimentResult], dimension: Dimension) -> Result<AggregateReport> {
    let (ok, excluded_failed) = successful_sorted(rows);
    let targets = common_targets(&ok)?;
    let mut values: Vec<DimensionValue> = ok.iter().map(|r| r.config.value(dimension)).collect();
    values.sort_by(DimensionValue::canonical_cmp);
    values.dedup();

    let groups = values
        .into_iter()
        .map(|value| {
            let members: Vec<_> = ok
                .iter()
                .filter(|r| r.config.value(dimension) == value)
                .map(|r| r.metrics.as_ref().expect("filtered to successful rows"))
                .collect();
            let n = members.len() as f64;
            let mean_of = |pick: fn(&CurveMetrics) -> &[f64]| -> Vec<f64> {
                (0..targets.len())
                    .map(|t| members.iter().map(|m| pick(m)[t]).sum::<f64>() / n)
                    .collect()
            };
            ParameterAggregate {
                value,
                rows: members.len(),
                average_percent_reviewed: members.iter().map(|m| m.average_percent_reviewed).sum::<f64>() / n,
                percent_reviewed: mean_of(|m| &m.percent_reviewed),
                precision: mean_of(|m| &m.precision),
            }
        })
        .collect();
    Ok(AggregateReport {
        dimension,
        targets,
        groups,
        excluded_failed,
    })
}

/// A row and its metrics at the requested recall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extreme<'a> {
    pub result: &'a ExperimentResult,
    pub percent_reviewed: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes<'a> {
    pub recall: f64,
    pub best: Extreme<'a>,
    pub worst: Extreme<'a>,
}

/// Least and most review effort at recall `r`, which must be one of the
/// evaluated targets. Ties go to the canonically first configuration.
pub fn extreme_combinations(rows: &[ExperimentResult], r: f64) -> Result<Extremes<'_>> {
    let (ok, _) = successful_sorted(rows);
    let targets = common_targets(&ok)?;
    if ok.is_empty() {
        return Err(Error::param("results", "no successful experiment rows"));
    }
    let t = targets
        .iter()
        .position(|&x| (x - r).abs() < 1e-9)
        .ok_or_else(|| {
            Error::param(
                "recall",
                alloc::format!("{r} is not among the evaluated targets {targets:?}"),
            )
        })?;
    let at = |row: &'_ ExperimentResult| {
        let m = row.metrics.as_ref().expect("filtered to successful rows");
        (m.percent_reviewed[t], m.precision[t])
    };
    let mut best = ok[0];
    let mut worst = ok[0];
    for &row in &ok[1..] {
        let p = at(row).0;
        if p.total_cmp(&at(best).0) == Ordering::Less {
            best = row;
        }
        if p.total_cmp(&at(worst).0) == Ordering::Greater {
            worst = row;
        }
    }
    let extreme = |row| {
        let (percent_reviewed, precision) = at(row);
        Extreme {
            result: row,
            percent_reviewed,
            precision,
        }
    };
    Ok(Extremes {
        recall: targets[t],
        best: extreme(best),
        worst: extreme(worst),
    })
}
