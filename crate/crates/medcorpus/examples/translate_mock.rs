//! Translation orchestration against the offline mock backends: batching,
//! retry with backoff, order-preserving collection, and document reassembly.
//!
//! ```bash
//! cargo run --example translate_mock
//! ```
//!
//! Against a real service, set MEDCORPUS_MT_URL and use the `http` backend;
//! the wire contract is POST {base}/translate with
//! `{"texts": [...], "src": "en", "tgt": "de"}`.

use std::time::Duration;

use medcorpus::corpus::Segment;
use medcorpus::translate::{
    plan_batches, reassemble, translate_all, RetryPolicy, ScriptedBackend,
};

fn main() {
    let segments: Vec<Segment> = (0..6)
        .map(|i| Segment {
            doc_id: format!("doc-{}", i / 3),
            source: "pubmed".into(),
            index: i % 3,
            sentence_range: (i % 3, i % 3),
            text: format!("sentence number {i}"),
            token_count: 3,
            hard_split: false,
        })
        .collect();

    let requests = plan_batches(&segments, 2, "en", "de").unwrap();
    println!("{} segments in {} batches of <= 2\n", segments.len(), requests.len());

    // Every batch fails twice before succeeding; four batches run in flight.
    let backend = ScriptedBackend::failing_first(2).with_jitter(3);
    let policy = RetryPolicy {
        max_retries: 3,
        initial_backoff: Duration::from_millis(1),
    };
    let outcome = translate_all(&requests, &backend, &policy, 4).unwrap();

    for t in &outcome.translated {
        println!(
            "{} -> {:?} (attempts: {})",
            t.segment_id, t.translated_text, t.attempt_count
        );
    }
    assert!(outcome.failures.is_empty());

    let documents = reassemble(&outcome.translated, &segments).unwrap();
    println!("\nreassembled {} documents:", documents.len());
    for doc in documents {
        println!("--- {} ({} lines)", doc.id, doc.text.lines().count());
        println!("{}", doc.text);
    }
}
