//! Markdown result tables in benchmark-leaderboard style: one row per
//! model, F1/P/R (plus EM for QA tasks) per task, three-decimal cells
//! without a leading zero, best value per column in bold, and
//! "mean ± std" cells when fold scores are present.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::MetricReport;
use crate::experiments::aggregate;

/// One evaluated (model, task) pair: either a single report or per-fold
/// reports to be aggregated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelTaskReport {
    pub model: String,
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<MetricReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub folds: Vec<MetricReport>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Metric {
    F1,
    Precision,
    Recall,
    Em,
}

impl Metric {
    fn label(self) -> &'static str {
        match self {
            Metric::F1 => "F1",
            Metric::Precision => "P",
            Metric::Recall => "R",
            Metric::Em => "EM",
        }
    }

    fn extract(self, report: &MetricReport) -> Option<f64> {
        match self {
            Metric::F1 => Some(report.f1),
            Metric::Precision => Some(report.precision),
            Metric::Recall => Some(report.recall),
            Metric::Em => report.em,
        }
    }
}

/// Three decimals without a leading zero: ".833", "1.000".
fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    match s.strip_prefix("0.") {
        Some(rest) => format!(".{rest}"),
        None => s,
    }
}

struct Cell {
    text: String,
    mean: f64,
}

fn cell(entry: &ModelTaskReport, metric: Metric) -> Result<Option<Cell>> {
    if !entry.folds.is_empty() {
        let scores: Vec<f64> = entry
            .folds
            .iter()
            .filter_map(|r| metric.extract(r))
            .collect();
        if scores.is_empty() {
            return Ok(None);
        }
        let agg = aggregate(&scores)?;
        return Ok(Some(Cell {
            text: format!("{} ± {}", fmt3(agg.mean), fmt3(agg.std)),
            mean: agg.mean,
        }));
    }
    Ok(entry.report.as_ref().and_then(|r| {
        metric.extract(r).map(|value| Cell {
            text: fmt3(value),
            mean: value,
        })
    }))
}

fn has_metric(entry: &ModelTaskReport, metric: Metric) -> bool {
    entry
        .report
        .as_ref()
        .map(|r| metric.extract(r).is_some())
        .unwrap_or(false)
        || entry.folds.iter().any(|r| metric.extract(r).is_some())
}

/// Render the combined markdown table. Returns the table and any warnings
/// (e.g. models covering different task sets; missing cells render as "—").
pub fn render_report(entries: &[ModelTaskReport]) -> Result<(String, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut tasks: Vec<String> = entries.iter().map(|e| e.task.clone()).collect();
    tasks.sort();
    tasks.dedup();
    let mut models: Vec<String> = entries.iter().map(|e| e.model.clone()).collect();
    models.sort();
    models.dedup();

    for model in &models {
        let covered: Vec<&str> = entries
            .iter()
            .filter(|e| &e.model == model)
            .map(|e| e.task.as_str())
            .collect();
        if covered.len() != tasks.len() {
            warnings.push(format!(
                "model \"{model}\" does not cover every task; rendering the union of columns"
            ));
        }
    }

    // Columns per task: F1/P/R, plus EM when the task has it anywhere.
    let mut columns: Vec<(String, Metric)> = Vec::new();
    for task in &tasks {
        let mut metrics = vec![Metric::F1, Metric::Precision, Metric::Recall];
        if entries
            .iter()
            .filter(|e| &e.task == task)
            .any(|e| has_metric(e, Metric::Em))
        {
            metrics.push(Metric::Em);
        }
        for metric in metrics {
            columns.push((task.clone(), metric));
        }
    }

    // Resolve every cell, tracking the best mean per column.
    let mut grid: Vec<Vec<Option<Cell>>> = Vec::with_capacity(models.len());
    for model in &models {
        let mut row = Vec::with_capacity(columns.len());
        for (task, metric) in &columns {
            let entry = entries
                .iter()
                .find(|e| &e.model == model && &e.task == task);
            let value = match entry {
                Some(e) => cell(e, *metric)?,
                None => None,
            };
            row.push(value);
        }
        grid.push(row);
    }
    let best: Vec<Option<f64>> = (0..columns.len())
        .map(|c| {
            grid.iter()
                .filter_map(|row| row[c].as_ref().map(|cell| cell.mean))
                .fold(None, |acc: Option<f64>, v| {
                    Some(acc.map_or(v, |a| a.max(v)))
                })
        })
        .collect();

    let mut out = String::from("| Model |");
    for (task, metric) in &columns {
        out.push_str(&format!(" {} {} |", task, metric.label()));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &columns {
        out.push_str("---|");
    }
    out.push('\n');
    for (model, row) in models.iter().zip(&grid) {
        out.push_str(&format!("| {model} |"));
        for (c, value) in row.iter().enumerate() {
            match value {
                Some(cell) => {
                    let is_best =
                        best[c].is_some_and(|b| (cell.mean - b).abs() < 1e-9);
                    if is_best {
                        out.push_str(&format!(" **{}** |", cell.text));
                    } else {
                        out.push_str(&format!(" {} |", cell.text));
                    }
                }
                None => out.push_str(" — |"),
            }
        }
        out.push('\n');
    }
    Ok((out, warnings))
}
