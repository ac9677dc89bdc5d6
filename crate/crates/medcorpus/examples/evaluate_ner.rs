//! Span-level NER evaluation: decode BIO tags into spans and compute
//! micro-averaged precision, recall and F1 with exact span matching.
//!
//! ```bash
//! cargo run --example evaluate_ner
//! ```

use medcorpus::eval::ner::{decode_bio, ner_micro_prf};

fn main() {
    // Token-level tags for two sentences.
    let gold_tags = [
        vec!["B-DIAG", "I-DIAG", "O", "O", "B-MED"],
        vec!["O", "B-PROC", "I-PROC", "O"],
    ];
    let pred_tags = [
        vec!["B-DIAG", "I-DIAG", "O", "O", "B-DIAG"], // wrong type on the last span
        vec!["O", "B-PROC", "I-PROC", "O"],
    ];

    let gold: Vec<_> = gold_tags.iter().map(|t| decode_bio(t).unwrap()).collect();
    let pred: Vec<_> = pred_tags.iter().map(|t| decode_bio(t).unwrap()).collect();

    println!("gold spans: {gold:?}");
    println!("pred spans: {pred:?}\n");

    let report = ner_micro_prf(&gold, &pred).unwrap();
    print!("{}", report.human_table());

    // A span only counts when start, end AND label match exactly, so the
    // mislabeled "B-DIAG" is both a false positive and a false negative.
}
