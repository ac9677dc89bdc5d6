//! Token counting with the two reference tokenizers: whitespace and greedy
//! longest-match subword (WordPiece-style `##` continuations).
//!
//! Segment budgets are tokenizer-parametric; any counter with deterministic,
//! per-word-additive counts can drive the segmenter.
//!
//! ```bash
//! cargo run --example tokenize_subword
//! ```

use std::sync::Arc;

use medcorpus::tokenizer::{count_tokens, SubwordVocab, TokenizerKind};

fn main() {
    let pieces = ["der", "patient", "ist", "sta", "##bil", "##tion", "[UNK]"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let vocab = SubwordVocab::new(pieces, "##", "[UNK]").unwrap();
    println!("vocab of {} pieces, unk = {:?}\n", vocab.len(), vocab.unk_piece());

    let subword = TokenizerKind::GreedySubword(Arc::new(vocab));
    let whitespace = TokenizerKind::Whitespace;

    for text in [
        "der patient ist stabil",      // "stabil" -> "sta" + "##bil"
        "der patient ist station",     // "station" -> "sta" + "##tion"
        "der patient ist wach",        // "wach" has no pieces -> one [UNK]
        "",
    ] {
        println!(
            "{text:>24?}  whitespace={}  subword={}",
            count_tokens(text, &whitespace),
            count_tokens(text, &subword),
        );
    }
}
