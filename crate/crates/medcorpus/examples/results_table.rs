//! Rendering evaluation reports as a markdown results table: one row per
//! model, three-decimal cells, best value per column in bold, and
//! "mean ± std" cells where fold scores exist.
//!
//! ```bash
//! cargo run --example results_table
//! ```

use medcorpus::cli::{render_report, ModelTaskReport};
use medcorpus::eval::MetricReport;

fn single(f1: f64, p: f64, r: f64) -> MetricReport {
    MetricReport {
        tp: None,
        fp: None,
        fn_: None,
        precision: p,
        recall: r,
        f1,
        em: None,
    }
}

fn main() {
    let entries = vec![
        ModelTaskReport {
            model: "gbert-base".into(),
            task: "GraSCCo".into(),
            report: Some(single(0.642, 0.617, 0.676)),
            folds: vec![],
        },
        ModelTaskReport {
            model: "gbert-clinical-base".into(),
            task: "GraSCCo".into(),
            report: Some(single(0.696, 0.670, 0.725)),
            folds: vec![],
        },
        ModelTaskReport {
            model: "gbert-base".into(),
            task: "BRONCO".into(),
            report: None,
            folds: vec![
                single(0.830, 0.817, 0.843),
                single(0.837, 0.820, 0.855),
                single(0.833, 0.818, 0.849),
            ],
        },
        ModelTaskReport {
            model: "gbert-clinical-base".into(),
            task: "BRONCO".into(),
            report: None,
            folds: vec![
                single(0.845, 0.826, 0.865),
                single(0.849, 0.830, 0.869),
                single(0.847, 0.828, 0.867),
            ],
        },
    ];

    let (table, warnings) = render_report(&entries).unwrap();
    for warning in warnings {
        eprintln!("warn: {warning}");
    }
    println!("{table}");
}
