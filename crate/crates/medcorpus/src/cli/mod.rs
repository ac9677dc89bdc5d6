//! Command-line interface: every pipeline stage and evaluation harness as a
//! subcommand with machine-readable outputs and a run manifest.
//!
//! Exit codes: 0 success, 1 data error, 2 usage/configuration error.
//! Outputs are deterministic and independent of `--workers`.

mod manifest;
mod report;

pub use manifest::{ManifestCounts, RunManifest};
pub use report::{render_report, ModelTaskReport};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::corpus::{ingest_jsonl, read_documents, read_jsonl, write_jsonl, Document, Segment};
use crate::error::{Error, Result};
use crate::eval::multilabel::{multilabel_micro_prf, read_gold_labels, read_scored_predictions};
use crate::eval::ner::{decode_bio, ner_micro_prf, read_conll, NerSpan, TaggedSentence};
use crate::eval::qa::{german_articles, pair_answers, qa_f1_em_with_articles, read_qa_predictions, read_squad_gold};
use crate::eval::MetricReport;
use crate::experiments::{
    corpus_stats, emit_task_config, make_folds, CorpusRecord, ModelSize,
};
use crate::filter::{filter_document, FilterConfig, FilterVerdict};
use crate::segmenter::{segment_document, SegmenterConfig};
use crate::tokenizer::{load_vocab, TokenizerKind};
use crate::translate::{
    plan_batches, reassemble, translate_all, EchoBackend, HttpBackend, RetryPolicy,
    TranslationBackend,
};

#[derive(Parser)]
#[command(
    name = "medcorpus",
    version,
    about = "Corpus construction and benchmark evaluation for German clinical NLP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for parallel stages (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Log verbosity on stderr
    #[arg(long, global = true, value_enum, default_value_t = LogLevel::Info)]
    log_level: LogLevel,

    /// Explicit manifest path (default: <output>.manifest.json)
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

#[derive(Copy, Clone)]
struct Logger {
    level: LogLevel,
}

impl Logger {
    fn warn(&self, msg: impl std::fmt::Display) {
        if self.level >= LogLevel::Warn {
            eprintln!("warn: {msg}");
        }
    }

    fn info(&self, msg: impl std::fmt::Display) {
        if self.level >= LogLevel::Info {
            eprintln!("info: {msg}");
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum OnError {
    /// Abort at the first malformed record
    Fail,
    /// Log malformed records and keep going (duplicate ids still abort)
    Skip,
}

#[derive(Copy, Clone, ValueEnum)]
enum BackendKind {
    Http,
    Mock,
}

#[derive(Copy, Clone, ValueEnum)]
enum SizeArg {
    Base,
    Large,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and normalize a raw JSONL document shard
    Ingest {
        #[arg(long, value_name = "JSONL")]
        r#in: PathBuf,
        #[arg(long, value_name = "JSONL")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OnError::Fail)]
        on_error: OnError,
    },
    /// Apply the paragraph quality filters
    Filter {
        #[arg(long, value_name = "JSONL")]
        r#in: PathBuf,
        #[arg(long, value_name = "JSONL")]
        out: PathBuf,
        #[arg(long, default_value_t = 0.60)]
        min_letter_ratio: f64,
        #[arg(long, default_value_t = 3.0)]
        min_words_per_line: f64,
        /// Write dropped-paragraph verdicts as JSONL
        #[arg(long, value_name = "JSONL")]
        drop_log: Option<PathBuf>,
    },
    /// Split documents into sentences and pack token-budgeted segments
    Segment {
        #[arg(long, value_name = "JSONL")]
        r#in: PathBuf,
        #[arg(long, value_name = "JSONL")]
        out: PathBuf,
        #[arg(long, default_value_t = 128)]
        max_tokens: usize,
        /// "whitespace" or "subword:<vocab-path>"
        #[arg(long, default_value = "whitespace")]
        tokenizer: String,
        /// One abbreviation per line; replaces the built-in German defaults
        #[arg(long, value_name = "FILE")]
        abbrev_file: Option<PathBuf>,
    },
    /// Send segments to a translation backend and reassemble documents
    Translate {
        #[arg(long, value_name = "JSONL")]
        r#in: PathBuf,
        #[arg(long, value_name = "JSONL")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendKind::Mock)]
        backend: BackendKind,
        #[arg(long, default_value_t = 16)]
        batch_size: usize,
        /// Concurrent batches (default: --workers, else 4)
        #[arg(long)]
        max_in_flight: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_retries: u32,
        #[arg(long, default_value_t = 250)]
        backoff_ms: u64,
        #[arg(long, default_value = "en")]
        src: String,
        #[arg(long, default_value = "de")]
        tgt: String,
        /// Failure manifest path (default: <out>.failures.jsonl, written
        /// only when batches fail)
        #[arg(long, value_name = "JSONL")]
        failures: Option<PathBuf>,
    },
    /// Per-source corpus statistics over document or segment shards
    Stats {
        #[arg(long = "in", value_name = "JSONL", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "whitespace")]
        tokenizer: String,
        /// Write the markdown table here instead of stdout
        #[arg(long, value_name = "MD")]
        markdown: Option<PathBuf>,
        #[arg(long, value_name = "CSV")]
        csv: Option<PathBuf>,
    },
    /// Span-level micro P/R/F1 for BIO-tagged NER files
    EvalNer {
        /// CoNLL TSV: token<TAB>gold (2 cols) or token<TAB>gold<TAB>pred (3 cols)
        #[arg(long, value_name = "TSV")]
        gold: PathBuf,
        /// Separate predictions file; its tag column is the prediction
        #[arg(long, value_name = "TSV")]
        pred: Option<PathBuf>,
        #[arg(long, value_name = "JSON")]
        out: Option<PathBuf>,
    },
    /// Micro P/R/F1 for multi-label classification
    EvalMultilabel {
        /// JSONL: {"id": ..., "labels": [...]}
        #[arg(long, value_name = "JSONL")]
        gold: PathBuf,
        /// JSONL: {"id": ..., "scores": {label: score}}
        #[arg(long, value_name = "JSONL")]
        pred: PathBuf,
        /// A label is predicted when its score is at least this
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long, value_name = "JSON")]
        out: Option<PathBuf>,
    },
    /// Token F1 and Exact Match for extractive QA
    EvalQa {
        /// SQuAD-v1-style gold JSON
        #[arg(long, value_name = "JSON")]
        gold: PathBuf,
        /// Predictions JSON: {question_id: answer}
        #[arg(long, value_name = "JSON")]
        pred: PathBuf,
        /// Comma-separated articles to strip during normalization
        /// (default: German article list; empty string keeps everything)
        #[arg(long)]
        articles: Option<String>,
        #[arg(long, value_name = "JSON")]
        out: Option<PathBuf>,
    },
    /// Deterministic seeded k-fold split of document ids
    CvSplit {
        /// One id per line
        #[arg(long, value_name = "FILE")]
        ids: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_name = "JSON")]
        out: Option<PathBuf>,
    },
    /// Emit the fine-tuning hyperparameters for a downstream task
    Config {
        /// BRONCO, GGPONC2, GraSCCo, CLEF or RadQA
        #[arg(long)]
        task: String,
        #[arg(long, value_enum)]
        size: SizeArg,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Render metric reports as a markdown results table
    Report {
        /// ModelTaskReport JSON files, one per (model, task)
        #[arg(required = true, value_name = "JSON")]
        inputs: Vec<PathBuf>,
        #[arg(long, value_name = "MD")]
        out: Option<PathBuf>,
    },
}

/// Parse argv, dispatch, write the manifest. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let logger = Logger {
        level: cli.log_level,
    };
    let started = Instant::now();
    match dispatch(&cli, logger) {
        Ok(mut run_manifest) => {
            run_manifest.wall_time_secs = started.elapsed().as_secs_f64();
            match run_manifest.write(cli.manifest.as_deref()) {
                Ok(Some(path)) => {
                    logger.info(format_args!("manifest written to {}", path.display()));
                    0
                }
                Ok(None) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::UnknownTask { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: &Cli, logger: Logger) -> Result<RunManifest> {
    match &cli.command {
        Command::Ingest { r#in, out, on_error } => cmd_ingest(r#in, out, *on_error, logger),
        Command::Filter {
            r#in,
            out,
            min_letter_ratio,
            min_words_per_line,
            drop_log,
        } => cmd_filter(
            r#in,
            out,
            *min_letter_ratio,
            *min_words_per_line,
            drop_log.as_deref(),
            cli.workers,
        ),
        Command::Segment {
            r#in,
            out,
            max_tokens,
            tokenizer,
            abbrev_file,
        } => cmd_segment(r#in, out, *max_tokens, tokenizer, abbrev_file.as_deref(), cli.workers),
        Command::Translate {
            r#in,
            out,
            backend,
            batch_size,
            max_in_flight,
            max_retries,
            backoff_ms,
            src,
            tgt,
            failures,
        } => cmd_translate(
            r#in,
            out,
            *backend,
            *batch_size,
            max_in_flight.or(cli.workers).unwrap_or(4),
            *max_retries,
            *backoff_ms,
            src,
            tgt,
            failures.as_deref(),
            logger,
        ),
        Command::Stats {
            inputs,
            tokenizer,
            markdown,
            csv,
        } => cmd_stats(inputs, tokenizer, markdown.as_deref(), csv.as_deref()),
        Command::EvalNer { gold, pred, out } => cmd_eval_ner(gold, pred.as_deref(), out.as_deref()),
        Command::EvalMultilabel {
            gold,
            pred,
            threshold,
            out,
        } => cmd_eval_multilabel(gold, pred, *threshold, out.as_deref()),
        Command::EvalQa {
            gold,
            pred,
            articles,
            out,
        } => cmd_eval_qa(gold, pred, articles.as_deref(), out.as_deref(), logger),
        Command::CvSplit { ids, k, seed, out } => cmd_cv_split(ids, *k, *seed, out.as_deref()),
        Command::Config { task, size, out } => cmd_config(task, *size, out.as_deref()),
        Command::Report { inputs, out } => cmd_report(inputs, out.as_deref(), logger),
    }
}

fn parse_tokenizer(spec: &str) -> Result<TokenizerKind> {
    if spec == "whitespace" {
        return Ok(TokenizerKind::Whitespace);
    }
    if let Some(path) = spec.strip_prefix("subword:") {
        let vocab = load_vocab(path)?;
        return Ok(TokenizerKind::GreedySubword(std::sync::Arc::new(vocab)));
    }
    Err(Error::Config(format!(
        "invalid --tokenizer \"{spec}\": expected \"whitespace\" or \"subword:<vocab-path>\""
    )))
}

fn with_pool<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn read_id_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut ids = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if !trimmed.is_empty() {
            ids.push(trimmed.to_string());
        }
    }
    Ok(ids)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_ingest(input: &Path, out: &Path, on_error: OnError, logger: Logger) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(
        "ingest",
        json!({ "in": input.display().to_string(), "out": out.display().to_string() }),
    );
    let mut docs = Vec::new();
    for item in ingest_jsonl(input)? {
        manifest.counts.read += 1;
        match item {
            Ok(doc) => {
                manifest.counts.kept += 1;
                docs.push(doc);
            }
            // duplicate ids always abort: silently merging or dropping them
            // would corrupt corpus statistics downstream
            Err(e @ Error::DuplicateDocId { .. }) => return Err(e),
            Err(e) => match on_error {
                OnError::Fail => return Err(e),
                OnError::Skip => {
                    manifest.counts.dropped += 1;
                    logger.warn(e);
                }
            },
        }
    }
    write_jsonl(out, &docs)?;
    manifest.inputs.push(input.display().to_string());
    manifest.outputs.push(out.display().to_string());
    Ok(manifest)
}

fn cmd_filter(
    input: &Path,
    out: &Path,
    min_letter_ratio: f64,
    min_words_per_line: f64,
    drop_log: Option<&Path>,
    workers: Option<usize>,
) -> Result<RunManifest> {
    let config = FilterConfig {
        min_letter_ratio,
        min_words_per_line,
    };
    config.validate()?;
    let mut manifest = RunManifest::new(
        "filter",
        json!({
            "in": input.display().to_string(),
            "out": out.display().to_string(),
            "min-letter-ratio": min_letter_ratio,
            "min-words-per-line": min_words_per_line,
        }),
    );
    let docs = read_documents(input)?;
    let results: Vec<(Option<Document>, Vec<FilterVerdict>)> =
        with_pool(workers, || {
            docs.par_iter().map(|d| filter_document(d, &config)).collect()
        })?;

    let mut kept_docs = Vec::new();
    let mut dropped: Vec<FilterVerdict> = Vec::new();
    for (filtered, verdicts) in results {
        for verdict in verdicts {
            manifest.counts.read += 1;
            if verdict.kept {
                manifest.counts.kept += 1;
            } else {
                manifest.counts.dropped += 1;
                dropped.push(verdict);
            }
        }
        if let Some(doc) = filtered {
            kept_docs.push(doc);
        }
    }
    write_jsonl(out, &kept_docs)?;
    if let Some(log_path) = drop_log {
        write_jsonl(log_path, &dropped)?;
    }
    manifest.inputs.push(input.display().to_string());
    manifest.outputs.push(out.display().to_string());
    Ok(manifest)
}

fn cmd_segment(
    input: &Path,
    out: &Path,
    max_tokens: usize,
    tokenizer_spec: &str,
    abbrev_file: Option<&Path>,
    workers: Option<usize>,
) -> Result<RunManifest> {
    let tokenizer = parse_tokenizer(tokenizer_spec)?;
    let mut config = SegmenterConfig::new(tokenizer);
    config.max_tokens = max_tokens;
    if let Some(path) = abbrev_file {
        config.abbreviations = read_id_lines(path)?.into_iter().collect();
    }
    config.validate()?;
    let mut manifest = RunManifest::new(
        "segment",
        json!({
            "in": input.display().to_string(),
            "out": out.display().to_string(),
            "max-tokens": max_tokens,
            "tokenizer": tokenizer_spec,
            "abbrev-file": abbrev_file.map(|p| p.display().to_string()),
        }),
    );
    let docs = read_documents(input)?;
    let per_doc: Vec<Result<Vec<Segment>>> = with_pool(workers, || {
        docs.par_iter().map(|d| segment_document(d, &config)).collect()
    })?;
    let mut segments = Vec::new();
    for result in per_doc {
        segments.extend(result?);
    }
    manifest.counts.read = docs.len() as u64;
    manifest.counts.kept = docs.len() as u64;
    manifest.counts.segments = segments.len() as u64;
    write_jsonl(out, &segments)?;
    manifest.inputs.push(input.display().to_string());
    manifest.outputs.push(out.display().to_string());
    Ok(manifest)
}

#[allow(clippy::too_many_arguments)]
fn cmd_translate(
    input: &Path,
    out: &Path,
    backend_kind: BackendKind,
    batch_size: usize,
    max_in_flight: usize,
    max_retries: u32,
    backoff_ms: u64,
    src: &str,
    tgt: &str,
    failures_path: Option<&Path>,
    logger: Logger,
) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(
        "translate",
        json!({
            "in": input.display().to_string(),
            "out": out.display().to_string(),
            "backend": match backend_kind { BackendKind::Http => "http", BackendKind::Mock => "mock" },
            "batch-size": batch_size,
            "max-retries": max_retries,
            "src": src,
            "tgt": tgt,
        }),
    );
    let segments: Vec<Segment> = read_jsonl(input)?;
    let requests = plan_batches(&segments, batch_size, src, tgt)?;
    let backend: Box<dyn TranslationBackend> = match backend_kind {
        BackendKind::Http => Box::new(HttpBackend::from_env()?),
        BackendKind::Mock => Box::new(EchoBackend),
    };
    let policy = RetryPolicy {
        max_retries,
        initial_backoff: Duration::from_millis(backoff_ms),
    };
    let outcome = translate_all(&requests, backend.as_ref(), &policy, max_in_flight)?;

    manifest.counts.read = segments.len() as u64;
    manifest.counts.translated = outcome.translated.len() as u64;
    manifest.counts.failed = outcome
        .failures
        .iter()
        .map(|f| f.segment_ids.len() as u64)
        .sum();
    manifest.counts.kept = manifest.counts.translated;
    manifest.counts.dropped = manifest.counts.failed;

    // Only documents whose segments all translated can be reassembled.
    let translated_ids: HashSet<&str> = outcome
        .translated
        .iter()
        .map(|t| t.segment_id.as_str())
        .collect();
    let mut doc_complete: HashMap<&str, bool> = HashMap::new();
    for segment in &segments {
        let complete = doc_complete.entry(segment.doc_id.as_str()).or_insert(true);
        if !translated_ids.contains(segment.uid().as_str()) {
            *complete = false;
        }
    }
    let reassemblable: Vec<Segment> = segments
        .iter()
        .filter(|s| doc_complete[s.doc_id.as_str()])
        .cloned()
        .collect();
    let documents = reassemble(&outcome.translated, &reassemblable)?;
    write_jsonl(out, &documents)?;

    if !outcome.failures.is_empty() {
        let path = failures_path
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(format!("{}.failures.jsonl", out.display())));
        write_jsonl(&path, &outcome.failures)?;
        logger.warn(format_args!(
            "{} segments in {} batches failed; manifest at {}",
            manifest.counts.failed,
            outcome.failures.len(),
            path.display()
        ));
        manifest.outputs.push(out.display().to_string());
        manifest.outputs.push(path.display().to_string());
    } else {
        manifest.outputs.push(out.display().to_string());
    }
    manifest.inputs.push(input.display().to_string());
    Ok(manifest)
}

fn cmd_stats(
    inputs: &[PathBuf],
    tokenizer_spec: &str,
    markdown: Option<&Path>,
    csv: Option<&Path>,
) -> Result<RunManifest> {
    let tokenizer = parse_tokenizer(tokenizer_spec)?;
    let mut manifest = RunManifest::new(
        "stats",
        json!({
            "in": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "tokenizer": tokenizer_spec,
        }),
    );
    let mut records: Vec<CorpusRecord> = Vec::new();
    let mut declared: Vec<String> = Vec::new();
    for path in inputs {
        let shard: Vec<CorpusRecord> = read_jsonl(path)?;
        if shard.is_empty() {
            // keep a (0, 0) row for an empty shard, named by its file stem
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                declared.push(stem.to_string());
            }
        }
        records.extend(shard);
        manifest.inputs.push(path.display().to_string());
    }
    manifest.counts.read = records.len() as u64;
    manifest.counts.kept = manifest.counts.read;
    let table = corpus_stats(records, &declared, &tokenizer);
    emit(markdown, &table.markdown())?;
    if let Some(path) = csv {
        write_text(path, &table.csv())?;
        manifest.outputs.push(path.display().to_string());
    }
    if let Some(path) = markdown {
        manifest.outputs.insert(0, path.display().to_string());
    }
    Ok(manifest)
}

fn tags_to_spans(sentences: &[TaggedSentence], use_pred_column: bool) -> Result<Vec<Vec<NerSpan>>> {
    sentences
        .iter()
        .map(|s| {
            let tags = if use_pred_column {
                s.pred.as_ref().expect("checked 3-column")
            } else {
                &s.gold
            };
            decode_bio(tags)
        })
        .collect()
}

fn cmd_eval_ner(gold: &Path, pred: Option<&Path>, out: Option<&Path>) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(
        "eval-ner",
        json!({
            "gold": gold.display().to_string(),
            "pred": pred.map(|p| p.display().to_string()),
            "out": out.map(|p| p.display().to_string()),
        }),
    );
    let gold_sentences = read_conll(gold)?;
    let (gold_spans, pred_spans) = match pred {
        Some(pred_path) => {
            let pred_sentences = read_conll(pred_path)?;
            if gold_sentences.len() != pred_sentences.len() {
                return Err(Error::LengthMismatch {
                    gold: gold_sentences.len(),
                    pred: pred_sentences.len(),
                });
            }
            for (i, (g, p)) in gold_sentences.iter().zip(&pred_sentences).enumerate() {
                if g.tokens.len() != p.tokens.len() {
                    return Err(Error::parse(
                        pred_path,
                        format!("sentence {}: token count differs from gold file", i + 1),
                    ));
                }
            }
            // a 3-column predictions file scores its own pred column
            let use_pred_col = pred_sentences.iter().all(|s| s.pred.is_some());
            (
                tags_to_spans(&gold_sentences, false)?,
                tags_to_spans(&pred_sentences, use_pred_col)?,
            )
        }
        None => {
            if gold_sentences.iter().any(|s| s.pred.is_none()) {
                return Err(Error::parse(
                    gold,
                    "no --pred file given and gold file has no prediction column",
                ));
            }
            (
                tags_to_spans(&gold_sentences, false)?,
                tags_to_spans(&gold_sentences, true)?,
            )
        }
    };
    let report = ner_micro_prf(&gold_spans, &pred_spans)?;
    manifest.counts.read = gold_sentences.len() as u64;
    manifest.counts.kept = manifest.counts.read;
    finish_eval(manifest, &report, gold, out)
}

fn cmd_eval_multilabel(
    gold: &Path,
    pred: &Path,
    threshold: f64,
    out: Option<&Path>,
) -> Result<RunManifest> {
    if !threshold.is_finite() {
        return Err(Error::Config("threshold must be finite".into()));
    }
    let mut manifest = RunManifest::new(
        "eval-multilabel",
        json!({
            "gold": gold.display().to_string(),
            "pred": pred.display().to_string(),
            "threshold": threshold,
            "out": out.map(|p| p.display().to_string()),
        }),
    );
    let gold_sets = read_gold_labels(gold)?;
    let pred_sets = read_scored_predictions(pred, threshold)?;
    let report = multilabel_micro_prf(&gold_sets, &pred_sets)?;
    manifest.counts.read = gold_sets.len() as u64;
    manifest.counts.kept = manifest.counts.read;
    finish_eval(manifest, &report, gold, out)
}

fn cmd_eval_qa(
    gold: &Path,
    pred: &Path,
    articles: Option<&str>,
    out: Option<&Path>,
    logger: Logger,
) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(
        "eval-qa",
        json!({
            "gold": gold.display().to_string(),
            "pred": pred.display().to_string(),
            "articles": articles,
            "out": out.map(|p| p.display().to_string()),
        }),
    );
    let article_set: BTreeSet<String> = match articles {
        None => german_articles(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.to_lowercase())
            .collect(),
    };
    let gold_answers = read_squad_gold(gold)?;
    let predictions = read_qa_predictions(pred)?;
    let (answers, missing) = pair_answers(&gold_answers, &predictions);
    if missing > 0 {
        logger.warn(format_args!(
            "{missing} gold questions have no prediction; scored as empty answers"
        ));
    }
    let report = qa_f1_em_with_articles(&answers, &article_set);
    manifest.counts.read = answers.len() as u64;
    manifest.counts.kept = manifest.counts.read;
    finish_eval(manifest, &report, gold, out)
}

fn finish_eval(
    mut manifest: RunManifest,
    report: &MetricReport,
    input: &Path,
    out: Option<&Path>,
) -> Result<RunManifest> {
    print!("{}", report.human_table());
    if let Some(path) = out {
        let json =
            serde_json::to_string_pretty(report).map_err(|e| Error::parse(path, e))?;
        write_text(path, &json)?;
        manifest.outputs.push(path.display().to_string());
    }
    manifest.inputs.push(input.display().to_string());
    Ok(manifest)
}

fn cmd_cv_split(ids_path: &Path, k: usize, seed: u64, out: Option<&Path>) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(
        "cv-split",
        json!({
            "ids": ids_path.display().to_string(),
            "k": k,
            "seed": seed,
            "out": out.map(|p| p.display().to_string()),
        }),
    );
    let ids = read_id_lines(ids_path)?;
    let assignment = make_folds(&ids, k, seed)?;
    let json = serde_json::to_string_pretty(&assignment)
        .map_err(|e| Error::parse(ids_path, e))?;
    emit(out, &format!("{json}\n"))?;
    manifest.counts.read = ids.len() as u64;
    manifest.counts.kept = manifest.counts.read;
    manifest.inputs.push(ids_path.display().to_string());
    if let Some(path) = out {
        manifest.outputs.push(path.display().to_string());
    }
    Ok(manifest)
}

fn cmd_config(task: &str, size: SizeArg, out: Option<&Path>) -> Result<RunManifest> {
    let size = match size {
        SizeArg::Base => ModelSize::Base,
        SizeArg::Large => ModelSize::Large,
    };
    let mut manifest = RunManifest::new(
        "config",
        json!({
            "task": task,
            "size": size.name(),
            "out": out.map(|p| p.display().to_string()),
        }),
    );
    let config = emit_task_config(task)?;
    emit(out, &config.key_values(size))?;
    if let Some(path) = out {
        manifest.outputs.push(path.display().to_string());
    }
    Ok(manifest)
}

fn cmd_report(inputs: &[PathBuf], out: Option<&Path>, logger: Logger) -> Result<RunManifest> {
    let mut manifest = RunManifest::new(
        "report",
        json!({
            "in": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "out": out.map(|p| p.display().to_string()),
        }),
    );
    let mut entries = Vec::new();
    for path in inputs {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let entry: ModelTaskReport =
            serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::parse(path, e))?;
        entries.push(entry);
        manifest.inputs.push(path.display().to_string());
    }
    let (table, warnings) = render_report(&entries)?;
    for warning in warnings {
        logger.warn(warning);
    }
    emit(out, &table)?;
    manifest.counts.read = entries.len() as u64;
    manifest.counts.kept = manifest.counts.read;
    if let Some(path) = out {
        manifest.outputs.push(path.display().to_string());
    }
    Ok(manifest)
}
