//! Paragraph-level quality filters.
//!
//! Two heuristics decide whether a paragraph enters the pre-training corpus:
//! the ratio of letters to non-whitespace characters and the average number
//! of words per line. Paragraphs *below* either threshold are dropped, so
//! values exactly at a threshold are kept.

use serde::{Deserialize, Serialize};

use crate::corpus::Paragraph;
use crate::error::{Error, Result};

/// Thresholds for the two quality filters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Minimum ratio of alphabetic to non-whitespace characters.
    pub min_letter_ratio: f64,
    /// Minimum average number of words per non-blank line.
    pub min_words_per_line: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            min_letter_ratio: 0.60,
            min_words_per_line: 3.0,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("min-letter-ratio", self.min_letter_ratio),
            ("min-words-per-line", self.min_words_per_line),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.min_letter_ratio > 1.0 {
            return Err(Error::Config(format!(
                "min-letter-ratio must lie in [0, 1], got {}",
                self.min_letter_ratio
            )));
        }
        Ok(())
    }
}

/// Why a paragraph was kept or dropped. When both filters fail, the letter
/// ratio wins so audit logs carry a single deterministic reason.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterReason {
    Kept,
    LowLetterRatio,
    LowWordsPerLine,
}

/// Per-paragraph filter outcome, one JSONL record per dropped paragraph in
/// the drop log. Ordered by (doc_id, paragraph index) regardless of worker
/// count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub doc_id: String,
    pub para_index: usize,
    pub kept: bool,
    pub letter_ratio: f64,
    pub words_per_line: f64,
    pub reason: FilterReason,
}

/// Ratio of Unicode-alphabetic characters to non-whitespace characters,
/// 0 when the paragraph has no non-whitespace characters.
///
/// "Letters" covers the German umlauts and ß via `char::is_alphabetic`;
/// whitespace is excluded from the denominator because clinical exports vary
/// wildly in indentation.
pub fn letter_ratio(text: &str) -> f64 {
    let mut letters = 0u64;
    let mut non_whitespace = 0u64;
    for c in text.chars() {
        if c.is_whitespace() {
            continue;
        }
        non_whitespace += 1;
        if c.is_alphabetic() {
            letters += 1;
        }
    }
    if non_whitespace == 0 {
        0.0
    } else {
        letters as f64 / non_whitespace as f64
    }
}

/// Total whitespace-delimited words divided by the number of non-blank
/// lines, 0 when there are no non-blank lines.
pub fn words_per_line(text: &str) -> f64 {
    let words = text.split_whitespace().count() as f64;
    let lines = text
        .split('\n')
        .filter(|l| !l.chars().all(char::is_whitespace))
        .count() as f64;
    if lines == 0.0 {
        0.0
    } else {
        words / lines
    }
}

/// Filter a whole document: split into paragraphs, apply both filters,
/// rebuild the body from the kept paragraphs.
///
/// Returns the filtered document (None when nothing survives) and the
/// verdicts for all paragraphs in order.
pub fn filter_document(
    doc: &crate::corpus::Document,
    config: &FilterConfig,
) -> (Option<crate::corpus::Document>, Vec<FilterVerdict>) {
    let paragraphs = crate::corpus::split_paragraphs(doc);
    let verdicts: Vec<FilterVerdict> = paragraphs
        .iter()
        .map(|p| apply_filter(p, config))
        .collect();
    let kept: Vec<Paragraph> = paragraphs
        .into_iter()
        .zip(&verdicts)
        .filter(|(_, v)| v.kept)
        .map(|(p, _)| p)
        .collect();
    let filtered = if kept.is_empty() {
        None
    } else {
        Some(crate::corpus::Document {
            text: crate::corpus::join_paragraphs(&kept),
            ..doc.clone()
        })
    };
    (filtered, verdicts)
}

/// Apply both filters to a paragraph. Kept iff letter_ratio >= threshold AND
/// words_per_line >= threshold.
pub fn apply_filter(paragraph: &Paragraph, config: &FilterConfig) -> FilterVerdict {
    let ratio = letter_ratio(&paragraph.text);
    let wpl = words_per_line(&paragraph.text);
    let reason = if ratio < config.min_letter_ratio {
        FilterReason::LowLetterRatio
    } else if wpl < config.min_words_per_line {
        FilterReason::LowWordsPerLine
    } else {
        FilterReason::Kept
    };
    FilterVerdict {
        doc_id: paragraph.doc_id.clone(),
        para_index: paragraph.index,
        kept: reason == FilterReason::Kept,
        letter_ratio: ratio,
        words_per_line: wpl,
        reason,
    }
}
