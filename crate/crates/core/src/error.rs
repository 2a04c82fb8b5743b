use std::path::PathBuf;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate lexicon entry `{surface}` (stem: {is_stem})")]
    DuplicateEntry { surface: String, is_stem: bool },

    #[error("entry `{surface}` carries conflicting scores {first} and {second}")]
    ConflictingScores {
        surface: String,
        first: f64,
        second: f64,
    },

    #[error("score {score} of `{surface}` lies outside the declared range [{lo}, {hi}]")]
    ScoreOutOfRange {
        surface: String,
        score: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid lexicon entry: {0}")]
    InvalidEntry(String),

    #[error("invalid lexicon range: {0}")]
    InvalidRange(String),

    #[error("no lexicon words matched; the score is undefined")]
    UndefinedScore,

    #[error("window {index} has no matched tokens")]
    EmptyWindow { index: usize },

    #[error("document has {tokens} tokens, needs more than {required}")]
    DocumentTooShort { tokens: usize, required: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Precondition(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
