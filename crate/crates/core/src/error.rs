use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid token {0:?}: tokens must be non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("empty sentence")]
    EmptySentence,

    #[error("empty corpus: no trainable vocabulary")]
    EmptyCorpus,

    #[error("pair {index}: {abbrev:?} is not a subsequence of {expansion:?}")]
    NotSubsequence {
        index: usize,
        abbrev: String,
        expansion: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
