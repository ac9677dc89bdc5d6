//! Paragraph quality filtering: split documents into paragraphs and apply
//! the letter-ratio and words-per-line filters.
//!
//! ```bash
//! cargo run --example filter_paragraphs
//! ```

use medcorpus::corpus::{split_paragraphs, Document};
use medcorpus::filter::{apply_filter, FilterConfig};

fn main() {
    let doc = Document {
        id: "brief-001".into(),
        source: "clinic".into(),
        text: "\
Sehr geehrte Kollegin, wir berichten über den oben genannten Patienten, \
der sich zur stationären Behandlung vorstellte.

Na+ 140 mmol/l
K+ 4.1 mmol/l
Krea 0.9

Der Patient war kardiopulmonal stabil und konnte am Folgetag in die \
ambulante Weiterbehandlung entlassen werden."
            .into(),
        meta: Default::default(),
    };

    // Defaults: letter ratio >= 0.60, words per line >= 3.0.
    let config = FilterConfig::default();
    println!(
        "thresholds: letter ratio >= {}, words per line >= {}\n",
        config.min_letter_ratio, config.min_words_per_line
    );

    for paragraph in split_paragraphs(&doc) {
        let verdict = apply_filter(&paragraph, &config);
        println!(
            "paragraph {} [{}] ratio={:.3} wpl={:.2} ({:?})",
            paragraph.index,
            if verdict.kept { "KEEP" } else { "DROP" },
            verdict.letter_ratio,
            verdict.words_per_line,
            verdict.reason,
        );
        let preview: String = paragraph.text.chars().take(60).collect();
        println!("  {preview}...\n");
    }
}
