//! BIO tag decoding and span-level micro precision/recall/F1.
//!
//! A prediction counts as a true positive only on an exact (start, end,
//! label) match; there is no partial-overlap credit. Decoding is lenient:
//! an `I-X` without a preceding `B-X`/`I-X` of the same type opens a new
//! span, matching common sequence-evaluation practice.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::MetricReport;

/// An entity span over token indices, both ends inclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NerSpan {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

impl NerSpan {
    pub fn new(start: usize, end: usize, label: impl Into<String>) -> Self {
        Self {
            start,
            end,
            label: label.into(),
        }
    }
}

/// Decode a BIO tag sequence into spans.
///
/// Tags must be `O`, `B-<label>` or `I-<label>`; anything else is an error
/// naming the position.
pub fn decode_bio<S: AsRef<str>>(tags: &[S]) -> Result<Vec<NerSpan>> {
    let mut spans = Vec::new();
    let mut open: Option<(usize, String)> = None;
    for (i, tag) in tags.iter().enumerate() {
        let tag = tag.as_ref();
        if tag == "O" {
            if let Some((start, label)) = open.take() {
                spans.push(NerSpan::new(start, i - 1, label));
            }
            continue;
        }
        let (prefix, label) = tag.split_once('-').ok_or_else(|| Error::MalformedTag {
            position: i,
            tag: tag.to_string(),
        })?;
        if label.is_empty() || !matches!(prefix, "B" | "I") {
            return Err(Error::MalformedTag {
                position: i,
                tag: tag.to_string(),
            });
        }
        let continues = prefix == "I" && open.as_ref().is_some_and(|(_, l)| l == label);
        if !continues {
            if let Some((start, open_label)) = open.take() {
                spans.push(NerSpan::new(start, i - 1, open_label));
            }
            open = Some((i, label.to_string()));
        }
    }
    if let Some((start, label)) = open {
        spans.push(NerSpan::new(start, tags.len() - 1, label));
    }
    Ok(spans)
}

/// Encode spans back into a BIO tag sequence of length `len`. Spans must be
/// in range and non-overlapping.
pub fn encode_bio(spans: &[NerSpan], len: usize) -> Result<Vec<String>> {
    let mut tags = vec!["O".to_string(); len];
    let mut sorted: Vec<&NerSpan> = spans.iter().collect();
    sorted.sort();
    let mut last_end: Option<usize> = None;
    for span in sorted {
        if span.end >= len || span.start > span.end {
            return Err(Error::Config(format!(
                "span ({}, {}, {}) out of range for length {len}",
                span.start, span.end, span.label
            )));
        }
        if last_end.is_some_and(|e| span.start <= e) {
            return Err(Error::Config(format!(
                "overlapping span at {}..={}",
                span.start, span.end
            )));
        }
        last_end = Some(span.end);
        tags[span.start] = format!("B-{}", span.label);
        for tag in tags.iter_mut().take(span.end + 1).skip(span.start + 1) {
            *tag = format!("I-{}", span.label);
        }
    }
    Ok(tags)
}

/// Micro P/R/F1 over aligned per-sentence span lists.
pub fn ner_micro_prf(gold: &[Vec<NerSpan>], pred: &[Vec<NerSpan>]) -> Result<MetricReport> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (g, p) in gold.iter().zip(pred) {
        let g: BTreeSet<&NerSpan> = g.iter().collect();
        let p: BTreeSet<&NerSpan> = p.iter().collect();
        tp += g.intersection(&p).count() as u64;
        fp += p.difference(&g).count() as u64;
        fn_ += g.difference(&p).count() as u64;
    }
    Ok(MetricReport::from_counts(tp, fp, fn_))
}

/// One CoNLL sentence: tokens with a gold tag column and an optional
/// prediction column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub gold: Vec<String>,
    pub pred: Option<Vec<String>>,
}

/// Read CoNLL-style TSV: one token per line with 2 columns
/// (`token<TAB>tag`) or 3 columns (`token<TAB>gold<TAB>pred`), sentences
/// separated by blank lines. The column count must be uniform.
pub fn read_conll(path: impl AsRef<Path>) -> Result<Vec<TaggedSentence>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut sentences = Vec::new();
    let mut tokens: Vec<String> = Vec::new();
    let mut gold: Vec<String> = Vec::new();
    let mut pred: Vec<String> = Vec::new();
    let mut columns: Option<usize> = None;

    let flush = |tokens: &mut Vec<String>,
                     gold: &mut Vec<String>,
                     pred: &mut Vec<String>,
                     sentences: &mut Vec<TaggedSentence>| {
        if tokens.is_empty() {
            return;
        }
        sentences.push(TaggedSentence {
            tokens: std::mem::take(tokens),
            gold: std::mem::take(gold),
            pred: if pred.is_empty() {
                None
            } else {
                Some(std::mem::take(pred))
            },
        });
    };

    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            flush(&mut tokens, &mut gold, &mut pred, &mut sentences);
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if !matches!(fields.len(), 2 | 3) {
            return Err(Error::parse(
                path,
                format!("line {}: expected 2 or 3 tab-separated columns", i + 1),
            ));
        }
        match columns {
            None => columns = Some(fields.len()),
            Some(n) if n != fields.len() => {
                return Err(Error::parse(
                    path,
                    format!("line {}: inconsistent column count", i + 1),
                ));
            }
            _ => {}
        }
        tokens.push(fields[0].to_string());
        gold.push(fields[1].to_string());
        if let Some(p) = fields.get(2) {
            pred.push(p.to_string());
        }
    }
    flush(&mut tokens, &mut gold, &mut pred, &mut sentences);
    Ok(sentences)
}
