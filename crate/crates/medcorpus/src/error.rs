//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A single bad record in a JSONL shard. Recoverable when the caller
    /// runs in skip-and-log mode.
    #[error("record error at line {line}: {message}")]
    Record { line: usize, message: String },

    #[error("duplicate document id \"{id}\" at line {line}")]
    DuplicateDocId { id: String, line: usize },

    #[error("duplicate vocab piece \"{piece}\" on lines {first_line} and {line}")]
    DuplicateVocabPiece {
        piece: String,
        first_line: usize,
        line: usize,
    },

    #[error("vocab file {path} does not contain the unk piece \"{unk}\"")]
    MissingUnkPiece { path: PathBuf, unk: String },

    #[error("empty vocab piece at line {line}")]
    EmptyVocabPiece { line: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("gold/pred length mismatch: {gold} gold sentences vs {pred} predicted")]
    LengthMismatch { gold: usize, pred: usize },

    #[error("malformed tag \"{tag}\" at position {position}")]
    MalformedTag { position: usize, tag: String },

    #[error("document \"{doc_id}\" present only in the {side} set")]
    UnalignedDoc { doc_id: String, side: String },

    #[error("missing translation for segment {segment_id}")]
    MissingTranslation { segment_id: String },

    #[error("unknown task \"{given}\"; valid tasks: {valid}")]
    UnknownTask { given: String, valid: String },

    #[error("cannot aggregate an empty score list")]
    EmptyScores,

    #[error("invalid fold request: k={k} with {n} ids (need 2 <= k <= n)")]
    FoldCount { k: usize, n: usize },

    #[error("duplicate id \"{id}\" in fold input")]
    DuplicateFoldId { id: String },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("translation backend error: {0}")]
    Backend(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
