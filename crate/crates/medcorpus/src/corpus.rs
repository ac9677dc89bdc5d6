//! Corpus data hierarchy and JSONL ingestion.
//!
//! Raw collections arrive as JSONL shards, one document per line:
//! `{"id": ..., "source": ..., "text": ..., "meta": {...}}`. Documents are
//! split into paragraphs on blank-line runs; paragraphs are later split into
//! sentences and packed into token-budgeted segments (see [`crate::segmenter`]).
//! Intermediate shards between pipeline stages reuse the same JSONL format.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One raw document of a collection.
///
/// Immutable after ingestion and safe to share across workers. `id` must be
/// unique within a collection; `source` is the corpus label (e.g. "pubmed",
/// "mimic") used for per-source statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default)]
    pub source: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

/// A paragraph of a document. Ordinals are dense from 0 per document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub doc_id: String,
    pub index: usize,
    pub text: String,
}

/// A sentence within a paragraph. Ordinals are dense from 0 per paragraph;
/// text is whitespace-normalized so that joining a paragraph's sentences with
/// single spaces reproduces the paragraph's normalized text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub para_index: usize,
    pub index: usize,
    pub text: String,
}

/// A translation unit: consecutive sentences of one document whose token
/// count fits the configured budget.
///
/// `sentence_range` is the inclusive `[first, last]` pair of document-level
/// sentence ordinals covered by this segment. When a single sentence exceeds
/// the budget it is hard-split into several segments that all carry the same
/// ordinal and `hard_split = true`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub doc_id: String,
    /// Corpus label of the parent document, carried through the pipeline so
    /// segment shards stay attributable per source.
    #[serde(default)]
    pub source: String,
    pub index: usize,
    pub sentence_range: (usize, usize),
    pub text: String,
    pub token_count: usize,
    pub hard_split: bool,
}

impl Segment {
    /// Stable identifier used by the translation layer and failure manifests.
    pub fn uid(&self) -> String {
        format!("{}:{}", self.doc_id, self.index)
    }
}

#[derive(Deserialize)]
struct RawDocument {
    id: String,
    #[serde(default)]
    source: String,
    text: String,
    #[serde(default)]
    meta: BTreeMap<String, String>,
}

/// Streaming reader over a JSONL document shard.
///
/// Yields documents in file order; blank lines are skipped. Malformed lines
/// and duplicate ids surface as `Err` items carrying the 1-based line number,
/// so callers choose between fail-fast (stop at the first error) and
/// skip-and-log (log and keep iterating).
pub struct JsonlDocuments {
    lines: Lines<BufReader<File>>,
    line_no: usize,
    seen_ids: HashSet<String>,
}

impl JsonlDocuments {
    fn parse_line(&mut self, line: &str) -> Result<Document> {
        let raw: RawDocument = serde_json::from_str(line).map_err(|e| Error::Record {
            line: self.line_no,
            message: e.to_string(),
        })?;
        if raw.id.is_empty() {
            return Err(Error::Record {
                line: self.line_no,
                message: "empty document id".into(),
            });
        }
        if !self.seen_ids.insert(raw.id.clone()) {
            return Err(Error::DuplicateDocId {
                id: raw.id,
                line: self.line_no,
            });
        }
        Ok(Document {
            id: raw.id,
            source: raw.source,
            // Normalize Windows line endings to a single canonical form.
            text: raw.text.replace("\r\n", "\n"),
            meta: raw.meta,
        })
    }
}

impl Iterator for JsonlDocuments {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => {
                    self.line_no += 1;
                    return Some(Err(Error::Record {
                        line: self.line_no,
                        message: e.to_string(),
                    }));
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some(self.parse_line(&line));
        }
    }
}

/// Open a JSONL shard for streaming ingestion.
pub fn ingest_jsonl(path: impl AsRef<Path>) -> Result<JsonlDocuments> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(JsonlDocuments {
        lines: BufReader::new(file).lines(),
        line_no: 0,
        seen_ids: HashSet::new(),
    })
}

/// Read a whole shard into memory, failing on the first bad record.
pub fn read_documents(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    ingest_jsonl(path)?.collect()
}

/// Write records as one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: impl AsRef<Path>, records: &[T]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).map_err(|e| Error::parse(path, e))?;
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Read any JSONL-encoded record type, failing on the first bad line.
pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let path: &Path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| {
            Error::parse(path, format!("line {}: {}", i + 1, e))
        })?;
        records.push(record);
    }
    Ok(records)
}

fn is_blank(line: &str) -> bool {
    line.chars().all(char::is_whitespace)
}

/// Split a document into paragraphs on runs of one or more blank lines.
///
/// Paragraphs are trimmed; empty paragraphs are dropped; ordinals are dense
/// from 0. Single newlines do not break a paragraph.
pub fn split_paragraphs(doc: &Document) -> Vec<Paragraph> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let flush = |lines: &mut Vec<&str>, paragraphs: &mut Vec<Paragraph>| {
        if lines.is_empty() {
            return;
        }
        let text = lines.join("\n").trim().to_string();
        lines.clear();
        if !text.is_empty() {
            paragraphs.push(Paragraph {
                doc_id: doc.id.clone(),
                index: paragraphs.len(),
                text,
            });
        }
    };
    for line in doc.text.split('\n') {
        if is_blank(line) {
            flush(&mut current, &mut paragraphs);
        } else {
            current.push(line);
        }
    }
    flush(&mut current, &mut paragraphs);
    paragraphs
}

/// Rebuild a document body from its kept paragraphs (used by the filter
/// stage; paragraphs are rejoined with blank lines).
pub fn join_paragraphs(paragraphs: &[Paragraph]) -> String {
    paragraphs
        .iter()
        .map(|p| p.text.as_str())
        .collect::<Vec<_>>()
        .join("\n\n")
}

pub(crate) fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
