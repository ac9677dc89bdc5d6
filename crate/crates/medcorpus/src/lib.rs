//! medcorpus: corpus construction and benchmark evaluation for German
//! clinical NLP.
//!
//! The pipeline turns raw document collections into translation-ready,
//! token-budgeted text and scores model predictions on the downstream tasks
//! the domain cares about:
//!
//! - [`corpus`]: document/paragraph/sentence/segment hierarchy, JSONL
//!   ingestion and shard formats
//! - [`filter`]: paragraph quality filters (letter ratio, words per line)
//! - [`tokenizer`]: pluggable token counting (whitespace or greedy subword)
//! - [`segmenter`]: sentence splitting and 128-token segment packing
//! - [`translate`]: batched machine-translation orchestration with retry
//!   and order-preserving reassembly
//! - [`eval`]: NER span F1, multi-label F1 with logarithmic class weights,
//!   extractive QA token-F1/EM
//! - [`experiments`]: seeded cross-validation, score aggregation, corpus
//!   statistics, per-task hyperparameter configs
//! - [`cli`]: the `medcorpus` executable's subcommands
//!
//! The `examples/` directory holds one runnable example per capability;
//! start with `cargo run --example filter_paragraphs`.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod filter;
pub mod segmenter;
pub mod tokenizer;
pub mod translate;

pub use corpus::{Document, Paragraph, Segment, Sentence};
pub use error::{Error, Result};
pub use eval::multilabel::{class_weights, multilabel_micro_prf, ClassWeights, LabelSet};
pub use eval::ner::{decode_bio, encode_bio, ner_micro_prf, NerSpan};
pub use eval::qa::{qa_f1_em, QaAnswer};
pub use eval::MetricReport;
pub use experiments::{aggregate, corpus_stats, emit_task_config, make_folds, FoldAssignment};
pub use filter::{apply_filter, FilterConfig, FilterVerdict};
pub use segmenter::{pack_segments, split_sentences, SegmenterConfig};
pub use tokenizer::{count_tokens, load_vocab, SubwordVocab, TokenizerKind};
