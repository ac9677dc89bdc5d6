//! Multi-label classification scoring and logarithmic class weighting.
//!
//! Micro scores are pooled over (document, label) pairs. The class weights
//! counteract label imbalance during fine-tuning: w_j = ln(N / (1 + c_j)),
//! so frequent labels get small (possibly negative) weights and rare labels
//! get large ones.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::MetricReport;

/// The labels assigned to one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    pub doc_id: String,
    pub labels: std::collections::BTreeSet<String>,
}

impl LabelSet {
    pub fn new<I, S>(doc_id: impl Into<String>, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            doc_id: doc_id.into(),
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }
}

/// Micro P/R/F1 over (document, label) pairs. Gold and predictions are
/// aligned by doc_id; a document present on only one side is an error.
pub fn multilabel_micro_prf(gold: &[LabelSet], pred: &[LabelSet]) -> Result<MetricReport> {
    let pred_by_id: BTreeMap<&str, &LabelSet> =
        pred.iter().map(|p| (p.doc_id.as_str(), p)).collect();
    let gold_ids: std::collections::BTreeSet<&str> =
        gold.iter().map(|g| g.doc_id.as_str()).collect();
    for p in pred {
        if !gold_ids.contains(p.doc_id.as_str()) {
            return Err(Error::UnalignedDoc {
                doc_id: p.doc_id.clone(),
                side: "prediction".into(),
            });
        }
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for g in gold {
        let p = pred_by_id
            .get(g.doc_id.as_str())
            .ok_or_else(|| Error::UnalignedDoc {
                doc_id: g.doc_id.clone(),
                side: "gold".into(),
            })?;
        tp += g.labels.intersection(&p.labels).count() as u64;
        fn_ += g.labels.difference(&p.labels).count() as u64;
        fp += p.labels.difference(&g.labels).count() as u64;
    }
    Ok(MetricReport::from_counts(tp, fp, fn_))
}

/// Positive class weights w_j = ln(N / (1 + c_j)).
///
/// Natural log; any other base only rescales all weights uniformly. A count
/// of N - 1 gives weight 0 exactly; counts above that give negative weights,
/// which are permitted but worth flagging.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    /// Total number of training samples.
    pub n: u64,
    pub counts: BTreeMap<String, u64>,
    pub weights: BTreeMap<String, f64>,
}

impl ClassWeights {
    /// Labels whose weight came out negative (count > N - 1).
    pub fn negative_labels(&self) -> Vec<&str> {
        self.weights
            .iter()
            .filter(|(_, w)| **w < 0.0)
            .map(|(label, _)| label.as_str())
            .collect()
    }
}

/// Compute the weight for every label. N must be at least 1.
pub fn class_weights(counts: &BTreeMap<String, u64>, n: u64) -> Result<ClassWeights> {
    if n < 1 {
        return Err(Error::Config("sample count N must be at least 1".into()));
    }
    let weights = counts
        .iter()
        .map(|(label, &c)| {
            let w = (n as f64 / (1.0 + c as f64)).ln();
            (label.clone(), w)
        })
        .collect();
    Ok(ClassWeights {
        n,
        counts: counts.clone(),
        weights,
    })
}

#[derive(Deserialize)]
struct GoldRecord {
    id: String,
    labels: Vec<String>,
}

#[derive(Deserialize)]
struct ScoreRecord {
    id: String,
    scores: BTreeMap<String, f64>,
}

/// Read gold label sets: JSONL of `{"id": ..., "labels": [...]}`.
pub fn read_gold_labels(path: impl AsRef<Path>) -> Result<Vec<LabelSet>> {
    read_lines(path, |record: GoldRecord| LabelSet::new(record.id, record.labels))
}

/// Read prediction scores (`{"id": ..., "scores": {label: score}}`) and
/// threshold them into label sets; a label is predicted when its score is
/// at least `threshold`.
pub fn read_scored_predictions(path: impl AsRef<Path>, threshold: f64) -> Result<Vec<LabelSet>> {
    read_lines(path, |record: ScoreRecord| {
        LabelSet::new(
            record.id,
            record
                .scores
                .into_iter()
                .filter(|(_, s)| *s >= threshold)
                .map(|(label, _)| label),
        )
    })
}

fn read_lines<T, R, F>(path: impl AsRef<Path>, convert: F) -> Result<Vec<T>>
where
    R: for<'de> Deserialize<'de>,
    F: Fn(R) -> T,
{
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: R = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, format!("line {}: {}", i + 1, e)))?;
        out.push(convert(record));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_two_document_fixture() {
        let gold = vec![LabelSet::new("d1", ["A", "B"]), LabelSet::new("d2", ["B"])];
        let pred = vec![LabelSet::new("d1", ["A"]), LabelSet::new("d2", ["B", "C"])];
        let r = multilabel_micro_prf(&gold, &pred).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (Some(2), Some(1), Some(1)));
        assert_eq!(r.precision, 2.0 / 3.0);
        assert_eq!(r.recall, 2.0 / 3.0);
        assert_eq!(r.f1, 2.0 / 3.0);
    }

    #[test]
    fn identical_sets_score_one() {
        let gold = vec![LabelSet::new("d1", ["A", "B"])];
        let r = multilabel_micro_prf(&gold, &gold.clone()).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn all_empty_predictions_zero_recall() {
        let gold = vec![LabelSet::new("d1", ["A"])];
        let pred = vec![LabelSet::new("d1", Vec::<String>::new())];
        let r = multilabel_micro_prf(&gold, &pred).unwrap();
        assert_eq!(r.recall, 0.0);
    }

    #[test]
    fn one_sided_document_is_an_error() {
        let gold = vec![LabelSet::new("d1", ["A"])];
        let pred = vec![LabelSet::new("d2", ["A"])];
        let err = multilabel_micro_prf(&gold, &pred).unwrap_err();
        assert!(matches!(err, Error::UnalignedDoc { .. }));
    }

    #[test]
    fn weight_of_count_99_of_1000_is_ln_10() {
        let counts = BTreeMap::from([("j".to_string(), 99u64)]);
        let w = class_weights(&counts, 1000).unwrap();
        assert!((w.weights["j"] - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn weight_zero_at_count_n_minus_one() {
        let counts = BTreeMap::from([("j".to_string(), 41u64)]);
        let w = class_weights(&counts, 42).unwrap();
        assert_eq!(w.weights["j"], 0.0);
    }

    #[test]
    fn zero_count_with_n_one_is_zero() {
        let counts = BTreeMap::from([("j".to_string(), 0u64)]);
        let w = class_weights(&counts, 1).unwrap();
        assert_eq!(w.weights["j"], 0.0);
    }

    #[test]
    fn negative_weights_are_flagged() {
        let counts = BTreeMap::from([("freq".to_string(), 100u64), ("rare".to_string(), 1u64)]);
        let w = class_weights(&counts, 50).unwrap();
        assert_eq!(w.negative_labels(), vec!["freq"]);
    }

    #[test]
    fn threshold_selects_labels() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        use std::io::Write as _;
        writeln!(f, r#"{{"id": "d1", "scores": {{"A": 0.9, "B": 0.5, "C": 0.1}}}}"#).unwrap();
        f.flush().unwrap();
        let sets = read_scored_predictions(f.path(), 0.5).unwrap();
        assert_eq!(sets[0], LabelSet::new("d1", ["A", "B"]));
    }

    proptest! {
        /// Weights strictly decrease in the label count for fixed N.
        #[test]
        fn weights_strictly_decreasing(n in 2u64..10_000, c in 0u64..5_000) {
            let c2 = c + 1;
            let counts = BTreeMap::from([
                ("a".to_string(), c),
                ("b".to_string(), c2),
            ]);
            let w = class_weights(&counts, n).unwrap();
            prop_assert!(w.weights["a"] > w.weights["b"]);
        }

        /// Scaling N and all (c_j + 1) by a common factor preserves the
        /// ordering of the weights.
        #[test]
        fn ordering_invariant_under_scaling(n in 10u64..1000, c1 in 0u64..500, c2 in 0u64..500, factor in 2u64..5) {
            let counts = BTreeMap::from([("a".to_string(), c1), ("b".to_string(), c2)]);
            let scaled = BTreeMap::from([
                ("a".to_string(), factor * (c1 + 1) - 1),
                ("b".to_string(), factor * (c2 + 1) - 1),
            ]);
            let w = class_weights(&counts, n).unwrap();
            let ws = class_weights(&scaled, factor * n).unwrap();
            let order = w.weights["a"].partial_cmp(&w.weights["b"]).unwrap();
            let order_scaled = ws.weights["a"].partial_cmp(&ws.weights["b"]).unwrap();
            prop_assert_eq!(order, order_scaled);
        }
    }
}
