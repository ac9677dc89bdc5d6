//! Multi-label classification scoring (ICD-coding style) and the
//! logarithmic positive class weights used to stabilize fine-tuning on
//! imbalanced label sets.
//!
//! ```bash
//! cargo run --example evaluate_multilabel
//! ```

use std::collections::BTreeMap;

use medcorpus::eval::multilabel::{class_weights, multilabel_micro_prf, LabelSet};

fn main() {
    let gold = vec![
        LabelSet::new("nts-1", ["C50", "C77"]),
        LabelSet::new("nts-2", ["C77"]),
    ];
    let pred = vec![
        LabelSet::new("nts-1", ["C50"]),
        LabelSet::new("nts-2", ["C77", "J18"]),
    ];
    let report = multilabel_micro_prf(&gold, &pred).unwrap();
    println!("micro scores over (document, label) pairs:");
    print!("{}", report.human_table());

    // Class weights w = ln(N / (1 + count)): rare labels get large weights.
    let counts = BTreeMap::from([
        ("C50".to_string(), 2_000u64),
        ("C77".to_string(), 150),
        ("J18".to_string(), 9),
        ("Q90".to_string(), 0),
    ]);
    let n = 8_000;
    let weights = class_weights(&counts, n).unwrap();
    println!("\npositive class weights for N = {n} training samples:");
    for (label, weight) in &weights.weights {
        println!("  {label}: count={:<5} w={weight:.4}", weights.counts[label]);
    }
    if !weights.negative_labels().is_empty() {
        println!("  negative weights: {:?}", weights.negative_labels());
    }
}
