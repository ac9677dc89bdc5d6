//! Pluggable token counting for segment budgets.
//!
//! Segment packing only needs token *counts*, so the tokenizer is an
//! abstraction with two reference implementations: plain whitespace counting
//! and a greedy longest-match subword counter over a loaded vocabulary
//! (WordPiece-style `##` continuations). Both are deterministic and additive
//! over whitespace-separated concatenation, which is what the packing
//! invariants rely on.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_UNK_PIECE: &str = "[UNK]";
pub const DEFAULT_CONTINUATION_PREFIX: &str = "##";

/// An ordered subword vocabulary; ids are dense line numbers starting at 0.
#[derive(Debug, Clone)]
pub struct SubwordVocab {
    pieces: Vec<String>,
    /// Pieces usable at the start of a word.
    start_index: HashMap<String, u32>,
    /// Continuation pieces, stored with the prefix stripped.
    continuation_index: HashMap<String, u32>,
    continuation_prefix: String,
    unk_piece: String,
    max_piece_chars: usize,
}

impl SubwordVocab {
    /// Build a vocabulary from pieces in id order.
    pub fn new(
        pieces: Vec<String>,
        continuation_prefix: &str,
        unk_piece: &str,
    ) -> Result<Self> {
        let mut start_index = HashMap::new();
        let mut continuation_index = HashMap::new();
        let mut max_piece_chars = 0;
        for (i, piece) in pieces.iter().enumerate() {
            let line = i + 1;
            if piece.is_empty() {
                return Err(Error::EmptyVocabPiece { line });
            }
            let id = i as u32;
            let (map, key) = match piece.strip_prefix(continuation_prefix) {
                Some(rest) if !rest.is_empty() => (&mut continuation_index, rest.to_string()),
                _ => (&mut start_index, piece.clone()),
            };
            max_piece_chars = max_piece_chars.max(key.chars().count());
            if let Some(first) = map.insert(key, id) {
                return Err(Error::DuplicateVocabPiece {
                    piece: piece.clone(),
                    first_line: first as usize + 1,
                    line,
                });
            }
        }
        if !start_index.contains_key(unk_piece) {
            return Err(Error::MissingUnkPiece {
                path: "<memory>".into(),
                unk: unk_piece.to_string(),
            });
        }
        Ok(Self {
            pieces,
            start_index,
            continuation_index,
            continuation_prefix: continuation_prefix.to_string(),
            unk_piece: unk_piece.to_string(),
            max_piece_chars,
        })
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn unk_piece(&self) -> &str {
        &self.unk_piece
    }

    pub fn continuation_prefix(&self) -> &str {
        &self.continuation_prefix
    }

    /// Id of a piece as written in the vocab file (continuation prefix
    /// included), if present.
    pub fn id_of(&self, piece: &str) -> Option<u32> {
        match piece.strip_prefix(self.continuation_prefix.as_str()) {
            Some(rest) if !rest.is_empty() => self.continuation_index.get(rest).copied(),
            _ => self.start_index.get(piece).copied(),
        }
    }

    /// Greedy longest-match token count of a single whitespace-free word.
    /// A word with any unmatchable position counts as exactly one unk token.
    fn count_word(&self, word: &str) -> usize {
        let chars: Vec<char> = word.chars().collect();
        let mut pos = 0;
        let mut count = 0;
        while pos < chars.len() {
            let index = if pos == 0 {
                &self.start_index
            } else {
                &self.continuation_index
            };
            let longest = (chars.len() - pos).min(self.max_piece_chars);
            let mut matched = 0;
            let mut candidate = String::new();
            for len in (1..=longest).rev() {
                candidate.clear();
                candidate.extend(&chars[pos..pos + len]);
                if index.contains_key(&candidate) {
                    matched = len;
                    break;
                }
            }
            if matched == 0 {
                return 1; // whole word becomes the unk token
            }
            count += 1;
            pos += matched;
        }
        count
    }
}

/// The token counter used by the segmenter. Cloneable and shareable across
/// workers; counting is pure.
#[derive(Debug, Clone)]
pub enum TokenizerKind {
    Whitespace,
    GreedySubword(Arc<SubwordVocab>),
}

impl TokenizerKind {
    /// Short description for manifests and logs.
    pub fn describe(&self) -> String {
        match self {
            TokenizerKind::Whitespace => "whitespace".to_string(),
            TokenizerKind::GreedySubword(v) => format!("subword({} pieces)", v.len()),
        }
    }
}

/// Load a vocabulary file: one piece per line, line number = id.
pub fn load_vocab(path: impl AsRef<Path>) -> Result<SubwordVocab> {
    load_vocab_with(path, DEFAULT_CONTINUATION_PREFIX, DEFAULT_UNK_PIECE)
}

pub fn load_vocab_with(
    path: impl AsRef<Path>,
    continuation_prefix: &str,
    unk_piece: &str,
) -> Result<SubwordVocab> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pieces = Vec::new();
    for line in BufReader::new(file).lines() {
        pieces.push(line.map_err(|e| Error::io(path, e))?);
    }
    SubwordVocab::new(pieces, continuation_prefix, unk_piece).map_err(|e| match e {
        Error::MissingUnkPiece { unk, .. } => Error::MissingUnkPiece {
            path: path.to_path_buf(),
            unk,
        },
        other => other,
    })
}

/// Count tokens in a text under the given tokenizer.
pub fn count_tokens(text: &str, tokenizer: &TokenizerKind) -> usize {
    match tokenizer {
        TokenizerKind::Whitespace => text.split_whitespace().count(),
        TokenizerKind::GreedySubword(vocab) => text
            .split_whitespace()
            .map(|word| vocab.count_word(word))
            .sum(),
    }
}
