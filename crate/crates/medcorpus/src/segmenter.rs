//! Sentence splitting and token-budgeted segment packing.
//!
//! Paragraphs are split into sentences by a rule-based splitter, then
//! consecutive sentences are greedily packed into segments whose token count
//! stays within the configured budget (128 by default). Segments are the
//! translation unit: long inputs translate poorly, so a single sentence that
//! exceeds the budget on its own is hard-split at token-aligned word
//! boundaries.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{collapse_whitespace, split_paragraphs, Document, Paragraph, Segment, Sentence};
use crate::error::{Error, Result};
use crate::tokenizer::{count_tokens, TokenizerKind};

/// German clinical abbreviations that must not end a sentence.
pub const GERMAN_ABBREVIATIONS: [&str; 7] = ["z.B.", "Dr.", "bzw.", "ca.", "u.a.", "evtl.", "ggf."];

#[derive(Debug, Clone)]
pub struct SegmenterConfig {
    /// Upper bound on tokens per segment.
    pub max_tokens: usize,
    /// Tokens ending with '.' after which no sentence boundary is placed.
    pub abbreviations: BTreeSet<String>,
    pub tokenizer: TokenizerKind,
}

impl SegmenterConfig {
    /// Budget 128 with the German abbreviation defaults.
    pub fn new(tokenizer: TokenizerKind) -> Self {
        Self {
            max_tokens: 128,
            abbreviations: GERMAN_ABBREVIATIONS.iter().map(|s| s.to_string()).collect(),
            tokenizer,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_tokens < 1 {
            return Err(Error::Config("max-tokens must be at least 1".into()));
        }
        for abbr in &self.abbreviations {
            if !abbr.ends_with('.') {
                return Err(Error::Config(format!(
                    "abbreviation \"{abbr}\" must end with '.'"
                )));
            }
        }
        Ok(())
    }
}

/// Split a paragraph into sentences.
///
/// The paragraph text is whitespace-normalized first, then boundaries are
/// placed after '.', '!' or '?' followed by a space and an uppercase letter
/// or digit. No boundary is placed inside decimal numbers (digit '.' digit)
/// or after a configured abbreviation.
pub fn split_sentences(paragraph: &Paragraph, config: &SegmenterConfig) -> Vec<Sentence> {
    let normalized = collapse_whitespace(&paragraph.text);
    let chars: Vec<char> = normalized.chars().collect();
    let mut sentences: Vec<Sentence> = Vec::new();
    let push = |text: String, sentences: &mut Vec<Sentence>| {
        let text = text.trim().to_string();
        if !text.is_empty() {
            sentences.push(Sentence {
                doc_id: paragraph.doc_id.clone(),
                para_index: paragraph.index,
                index: sentences.len(),
                text,
            });
        }
    };

    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        if c == '.'
            && i > 0
            && chars[i - 1].is_ascii_digit()
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())
        {
            // decimal number, e.g. "38.5"
            i += 1;
            continue;
        }
        let followed_by_space = chars.get(i + 1) == Some(&' ');
        let opens_sentence = chars
            .get(i + 2)
            .is_some_and(|n| n.is_uppercase() || n.is_ascii_digit());
        if !(followed_by_space && opens_sentence) {
            i += 1;
            continue;
        }
        if c == '.' {
            // abbreviation guard: the whitespace-delimited token ending here
            let mut word_start = i;
            while word_start > 0 && chars[word_start - 1] != ' ' {
                word_start -= 1;
            }
            let token: String = chars[word_start..=i].iter().collect();
            if config.abbreviations.contains(&token) {
                i += 1;
                continue;
            }
        }
        push(chars[start..=i].iter().collect(), &mut sentences);
        start = i + 2;
        i += 2;
    }
    if start < chars.len() {
        push(chars[start..].iter().collect(), &mut sentences);
    }
    sentences
}

/// Greedily pack consecutive sentences of one document into segments of at
/// most `max_tokens` tokens.
///
/// The next sentence joins the open segment iff the joined text still fits
/// the budget, else a new segment starts. A sentence whose own count exceeds
/// the budget is hard-split at token-aligned word boundaries (and, if a
/// single word still exceeds the budget, at character boundaries) into
/// pieces that each fit; those pieces carry `hard_split = true` and share
/// the sentence's ordinal.
pub fn pack_segments(sentences: &[Sentence], config: &SegmenterConfig) -> Result<Vec<Segment>> {
    if config.max_tokens < 1 {
        return Err(Error::Config("max-tokens must be at least 1".into()));
    }
    let mut segments: Vec<Segment> = Vec::new();
    let Some(first) = sentences.first() else {
        return Ok(segments);
    };
    let doc_id = first.doc_id.clone();
    let tk = &config.tokenizer;

    let emit = |segments: &mut Vec<Segment>,
                    text: String,
                    range: (usize, usize),
                    token_count: usize,
                    hard_split: bool| {
        segments.push(Segment {
            doc_id: doc_id.clone(),
            source: String::new(),
            index: segments.len(),
            sentence_range: range,
            text,
            token_count,
            hard_split,
        });
    };

    let mut open_text = String::new();
    let mut open_range: Option<(usize, usize)> = None;
    let mut open_count = 0usize;

    for (ordinal, sentence) in sentences.iter().enumerate() {
        let sentence_count = count_tokens(&sentence.text, tk);
        if sentence_count > config.max_tokens {
            if let Some(range) = open_range.take() {
                emit(&mut segments, std::mem::take(&mut open_text), range, open_count, false);
            }
            for (piece, count) in hard_split_sentence(&sentence.text, config) {
                emit(&mut segments, piece, (ordinal, ordinal), count, true);
            }
            continue;
        }
        match open_range {
            None => {
                open_text = sentence.text.clone();
                open_range = Some((ordinal, ordinal));
                open_count = sentence_count;
            }
            Some((first_ord, _)) => {
                let candidate = format!("{open_text} {}", sentence.text);
                let candidate_count = count_tokens(&candidate, tk);
                if candidate_count <= config.max_tokens {
                    open_text = candidate;
                    open_range = Some((first_ord, ordinal));
                    open_count = candidate_count;
                } else {
                    let range = open_range.take().unwrap();
                    emit(&mut segments, std::mem::take(&mut open_text), range, open_count, false);
                    open_text = sentence.text.clone();
                    open_range = Some((ordinal, ordinal));
                    open_count = sentence_count;
                }
            }
        }
    }
    if let Some(range) = open_range {
        emit(&mut segments, open_text, range, open_count, false);
    }
    Ok(segments)
}

/// Split an oversized sentence into word-aligned pieces that each fit the
/// budget. Returns (text, token_count) pairs.
fn hard_split_sentence(text: &str, config: &SegmenterConfig) -> Vec<(String, usize)> {
    let tk = &config.tokenizer;
    let max = config.max_tokens;
    let mut pieces: Vec<(String, usize)> = Vec::new();
    let mut current = String::new();
    let mut current_count = 0usize;

    for word in text.split_whitespace() {
        let word_count = count_tokens(word, tk);
        if word_count > max {
            if !current.is_empty() {
                pieces.push((std::mem::take(&mut current), current_count));
                current_count = 0;
            }
            split_oversized_word(word, config, &mut pieces);
            continue;
        }
        if current.is_empty() {
            current = word.to_string();
            current_count = word_count;
            continue;
        }
        let candidate = format!("{current} {word}");
        let candidate_count = count_tokens(&candidate, tk);
        if candidate_count <= max {
            current = candidate;
            current_count = candidate_count;
        } else {
            pieces.push((std::mem::take(&mut current), current_count));
            current = word.to_string();
            current_count = word_count;
        }
    }
    if !current.is_empty() {
        pieces.push((current, current_count));
    }
    pieces
}

/// Last resort for a single word exceeding the budget (only possible with
/// subword tokenizers): cut at character boundaries, longest fitting prefix
/// first. A one-character piece always counts at most 1 token, so this
/// terminates for any budget >= 1.
fn split_oversized_word(word: &str, config: &SegmenterConfig, pieces: &mut Vec<(String, usize)>) {
    let tk = &config.tokenizer;
    let chars: Vec<char> = word.chars().collect();
    let mut start = 0;
    while start < chars.len() {
        let mut best_len = 1;
        let mut best_count = count_tokens(&chars[start..start + 1].iter().collect::<String>(), tk);
        // subword counts are not monotone in prefix length, so scan all
        for len in 2..=chars.len() - start {
            let prefix: String = chars[start..start + len].iter().collect();
            let count = count_tokens(&prefix, tk);
            if count <= config.max_tokens {
                best_len = len;
                best_count = count;
            }
        }
        pieces.push((chars[start..start + best_len].iter().collect(), best_count));
        start += best_len;
    }
}

/// Full per-document pipeline: paragraphs -> sentences -> packed segments,
/// with the document's source label stamped onto every segment.
pub fn segment_document(doc: &Document, config: &SegmenterConfig) -> Result<Vec<Segment>> {
    let paragraphs = split_paragraphs(doc);
    let sentences: Vec<Sentence> = paragraphs
        .iter()
        .flat_map(|p| split_sentences(p, config))
        .collect();
    let mut segments = pack_segments(&sentences, config)?;
    for segment in &mut segments {
        segment.source = doc.source.clone();
    }
    Ok(segments)
}

/// Per-source totals over a segmented corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceStats {
    /// Distinct original documents.
    pub documents: u64,
    pub segments: u64,
    pub tokens: u64,
}

/// Fold a segment stream into per-source (documents, segments, tokens).
pub fn count_segments<'a, I>(segments: I) -> BTreeMap<String, SourceStats>
where
    I: IntoIterator<Item = &'a Segment>,
{
    let mut stats: BTreeMap<String, SourceStats> = BTreeMap::new();
    let mut seen_docs: BTreeMap<String, HashSet<&'a str>> = BTreeMap::new();
    for segment in segments {
        let entry = stats.entry(segment.source.clone()).or_default();
        entry.segments += 1;
        entry.tokens += segment.token_count as u64;
        if seen_docs
            .entry(segment.source.clone())
            .or_default()
            .insert(&segment.doc_id)
        {
            entry.documents += 1;
        }
    }
    stats
}
