use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("factorization breakdown at pivot {index} (|d| = {pivot:e})")]
    Factorization { index: usize, pivot: f64 },

    #[error("eigensolver diagnostics: {0}")]
    Diagnostics(String),

    #[error("no convergence: {message}")]
    Convergence {
        message: String,
        /// (T, N_elems, lambda) triples visited before giving up.
        record: Vec<(f64, usize, Option<f64>)>,
    },

    #[error("mode {mode}: {source}")]
    Mode {
        mode: i32,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain rejected: {0}")]
    Domain(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
