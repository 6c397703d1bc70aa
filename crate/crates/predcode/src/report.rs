//! Aggregate, extremes and plot-series CSV text built from a result table.

use anyhow::{anyhow, Result};
use predcode_core::features::TokenValueType;
use predcode_core::learners::AlgorithmChoice;
use predcode_core::sweep::{aggregate_by_parameter, extreme_combinations, Dimension, ExperimentConfig};

use crate::results::{target_label, ResultTable};

fn csv_text(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

/// One row per value of `dimension`: group size, mean average percent
/// reviewed, then mean percent reviewed and mean precision per target.
pub fn aggregate_csv(table: &ResultTable, dimension: Dimension) -> Result<String> {
    let report = aggregate_by_parameter(&table.rows, dimension).map_err(|e| anyhow!("{e}"))?;
    let mut head = vec![dimension.to_string(), "rows".into(), "avg_percent_reviewed".into()];
    head.extend(table.targets.iter().map(|&r| format!("reviewed_at_{}", target_label(r))));
    head.extend(table.targets.iter().map(|&r| format!("precision_at_{}", target_label(r))));
    let mut rows = vec![head];
    for g in &report.groups {
        let mut row = vec![g.value.to_string(), g.rows.to_string(), g.average_percent_reviewed.to_string()];
        row.extend(g.percent_reviewed.iter().map(f64::to_string));
        row.extend(g.precision.iter().map(f64::to_string));
        rows.push(row);
    }
    if report.excluded_failed > 0 {
        log::warn!("{} failed rows excluded from the aggregate", report.excluded_failed);
    }
    csv_text(rows)
}

fn describe(c: &ExperimentConfig) -> [String; 6] {
    [
        if c.stemming { "Yes" } else { "No" }.to_string(),
        c.token_count.to_string(),
        c.ngram_order.to_string(),
        format!("{}%", c.sampling_percent),
        match c.value_type {
            TokenValueType::Binary => "Binary",
            TokenValueType::Frequency => "Frequency",
            TokenValueType::NormalizedTermFrequency => "Normalized Term Frequency",
            TokenValueType::Tfidf => "TFIDF",
        }
        .to_string(),
        match c.algorithm {
            AlgorithmChoice::Svm => "SVM",
            AlgorithmChoice::LogisticRegression => "LR",
        }
        .to_string(),
    ]
}

/// Strongest and weakest configuration at recall `r`, laid out as
/// parameter rows with a column for each.
pub fn extremes_csv(table: &ResultTable, r: f64) -> Result<String> {
    let e = extreme_combinations(&table.rows, r).map_err(|e| anyhow!("{e}"))?;
    let pct = target_label(e.recall);
    let labels = [
        "Word Stemming",
        "Number of Tokens",
        "N-Grams",
        "Down Sampling",
        "Token Value Type",
        "Machine Learning Algorithm",
    ];
    let best = describe(&e.best.result.config);
    let worst = describe(&e.worst.result.config);
    let mut rows = vec![vec!["Parameter Type".to_string(), "Strongest".into(), "Weakest".into()]];
    for i in 0..labels.len() {
        rows.push(vec![labels[i].to_string(), best[i].clone(), worst[i].clone()]);
    }
    rows.push(vec![
        format!("Precision @ {pct}% Recall"),
        format!("{:.2}", e.best.precision),
        format!("{:.2}", e.worst.precision),
    ]);
    rows.push(vec![
        format!("Documents Requiring Review @ {pct}% Recall"),
        format!("{:.2}", e.best.percent_reviewed),
        format!("{:.2}", e.worst.percent_reviewed),
    ]);
    csv_text(rows)
}

/// Which curves [`plot_data_csv`] emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotSeries {
    /// One series per token value type.
    ValueType,
    /// One series per learning algorithm.
    Algorithm,
    /// One series per down-sampling percentage.
    Sampling,
    /// Strongest and weakest configuration at 80% recall.
    Extremes,
}

/// Curves in long format `series,recall,percent_reviewed,precision`.
pub fn plot_data_csv(table: &ResultTable, series: PlotSeries) -> Result<String> {
    let dimension = match series {
        PlotSeries::ValueType => Dimension::ValueType,
        PlotSeries::Algorithm => Dimension::Algorithm,
        PlotSeries::Sampling => Dimension::Sampling,
        PlotSeries::Extremes => {
            let e = extreme_combinations(&table.rows, 0.8).map_err(|e| anyhow!("{e}"))?;
            let mut rows = vec![head()];
            for (name, x) in [("strongest", e.best), ("weakest", e.worst)] {
                let m = x.result.metrics.as_ref().expect("extremes are successful rows");
                for (t, &r) in m.targets.iter().enumerate() {
                    rows.push(vec![
                        name.into(),
                        r.to_string(),
                        m.percent_reviewed[t].to_string(),
                        m.precision[t].to_string(),
                    ]);
                }
            }
            return csv_text(rows);
        }
    };
    let report = aggregate_by_parameter(&table.rows, dimension).map_err(|e| anyhow!("{e}"))?;
    let mut rows = vec![head()];
    for g in &report.groups {
        for (t, &r) in report.targets.iter().enumerate() {
            rows.push(vec![
                g.value.to_string(),
                r.to_string(),
                g.percent_reviewed[t].to_string(),
                g.precision[t].to_string(),
            ]);
        }
    }
    csv_text(rows)
}

fn head() -> Vec<String> {
    ["series", "recall", "percent_reviewed", "precision"]
        .map(String::from)
        .to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use predcode_core::evaluation::CurveMetrics;
    use predcode_core::sweep::{enumerate_grid, ExperimentResult, ParameterGrid, RunDiagnostics};

    fn table() -> ResultTable {
        let grid = ParameterGrid {
            stemming: vec![false],
            ngram_orders: vec![1],
            token_counts: vec![1000],
            sampling_percentages: vec![25.0, 100.0],
            ..ParameterGrid::full()
        };
        let targets = vec![0.5, 0.8];
        let rows = enumerate_grid(&grid)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, config)| {
                let base = 10.0 + i as f64;
                ExperimentResult {
                    config,
                    metrics: Some(CurveMetrics {
                        targets: targets.clone(),
                        percent_reviewed: vec![base, base * 2.0],
                        precision: vec![100.0 / base, 50.0 / base],
                        average_percent_reviewed: base * 1.5,
                    }),
                    diagnostics: RunDiagnostics::default(),
                    error: None,
                }
            })
            .collect();
        ResultTable { targets, rows }
    }

    #[test]
    fn aggregate_rows_per_value() {
        let text = aggregate_csv(&table(), Dimension::Algorithm).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "algorithm,rows,avg_percent_reviewed,reviewed_at_50,reviewed_at_80,precision_at_50,precision_at_80");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("svm,8,"));
        assert!(lines[2].starts_with("lr,8,"));
    }

    #[test]
    fn extremes_layout() {
        let text = extremes_csv(&table(), 0.8).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "Parameter Type,Strongest,Weakest");
        assert_eq!(lines[4], "Down Sampling,25%,100%");
        assert_eq!(lines[6], "Machine Learning Algorithm,SVM,LR");
        assert_eq!(lines[7], "Precision @ 80% Recall,5.00,2.00");
        assert_eq!(lines[8], "Documents Requiring Review @ 80% Recall,20.00,50.00");
    }

    #[test]
    fn plot_series_of_every_kind() {
        let t = table();
        assert_eq!(plot_data_csv(&t, PlotSeries::ValueType).unwrap().lines().count(), 1 + 4 * 2);
        assert_eq!(plot_data_csv(&t, PlotSeries::Algorithm).unwrap().lines().count(), 1 + 2 * 2);
        assert_eq!(plot_data_csv(&t, PlotSeries::Sampling).unwrap().lines().count(), 1 + 2 * 2);
        let ex = plot_data_csv(&t, PlotSeries::Extremes).unwrap();
        assert!(ex.lines().nth(1).unwrap().starts_with("strongest,0.5,10,"));
    }
}
