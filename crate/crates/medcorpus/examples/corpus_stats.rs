//! Per-source corpus statistics rendered as a Dataset/Tokens/Documents
//! table with human-readable magnitudes and a Total row.
//!
//! ```bash
//! cargo run --example corpus_stats
//! ```

use medcorpus::corpus::Document;
use medcorpus::experiments::{corpus_stats, CorpusRecord};
use medcorpus::tokenizer::TokenizerKind;

fn main() {
    let doc = |id: &str, source: &str, words: usize| {
        CorpusRecord::Document(Document {
            id: id.into(),
            source: source.into(),
            text: vec!["wort"; words].join(" "),
            meta: Default::default(),
        })
    };

    let records = vec![
        doc("p1", "german-pubmed", 310),
        doc("p2", "german-pubmed", 280),
        doc("m1", "mimic", 1250),
        doc("m2", "mimic", 990),
        doc("m3", "mimic", 1430),
    ];

    // "translated-pubmed" is declared but empty, so it keeps a (0, 0) row.
    let table = corpus_stats(
        records,
        &["translated-pubmed".to_string()],
        &TokenizerKind::Whitespace,
    );

    println!("{}", table.markdown());
    println!("machine-readable CSV:\n{}", table.csv());
}
