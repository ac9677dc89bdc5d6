//! Task evaluation metrics: span-level NER scores, multi-label
//! classification scores with logarithmic class weights, and extractive QA
//! token-F1/Exact-Match.
//!
//! All scores are micro-averaged: true positives, false positives and false
//! negatives are pooled over every instance and class before computing
//! precision, recall and F1. Aggregation over count triples is associative,
//! so evaluation parallelizes freely.

pub mod multilabel;
pub mod ner;
pub mod qa;

use serde::{Deserialize, Serialize};

/// A metric result serializable to the result tables.
///
/// Count-based tasks (NER, multi-label) carry tp/fp/fn; QA reports means
/// over questions instead and adds Exact Match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tp: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp: Option<u64>,
    #[serde(rename = "fn", default, skip_serializing_if = "Option::is_none")]
    pub fn_: Option<u64>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub em: Option<f64>,
}

impl MetricReport {
    /// Micro scores from pooled counts. The F1 is computed as
    /// `2*tp / (2*tp + fp + fn)`, which equals the harmonic mean of
    /// precision and recall exactly (and avoids the intermediate rounding
    /// of `2pr/(p+r)`).
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = ratio(2 * tp, 2 * tp + fp + fn_);
        Self {
            tp: Some(tp),
            fp: Some(fp),
            fn_: Some(fn_),
            precision,
            recall,
            f1,
            em: None,
        }
    }

    /// Mean-over-questions report for extractive QA.
    pub fn qa(precision: f64, recall: f64, f1: f64, em: f64) -> Self {
        Self {
            tp: None,
            fp: None,
            fn_: None,
            precision,
            recall,
            f1,
            em: Some(em),
        }
    }

    /// Render the fixed-width human-readable block printed by the eval
    /// subcommands.
    pub fn human_table(&self) -> String {
        let mut out = String::new();
        if let (Some(tp), Some(fp), Some(fn_)) = (self.tp, self.fp, self.fn_) {
            out.push_str(&format!("tp         {tp}\n"));
            out.push_str(&format!("fp         {fp}\n"));
            out.push_str(&format!("fn         {fn_}\n"));
        }
        out.push_str(&format!("precision  {:.3}\n", self.precision));
        out.push_str(&format!("recall     {:.3}\n", self.recall));
        out.push_str(&format!("f1         {:.3}\n", self.f1));
        if let Some(em) = self.em {
            out.push_str(&format!("em         {em:.3}\n"));
        }
        out
    }
}

fn ratio(num: u64, denom: u64) -> f64 {
    if denom == 0 {
        0.0
    } else {
        num as f64 / denom as f64
    }
}
