use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown arrangement '{name}'; known names: {known}")]
    UnknownCatalogName { name: String, known: String },

    #[error("unsupported field '{0}'")]
    UnsupportedField(String),

    #[error("budget exhausted after {pairs} S-pairs")]
    BudgetExhausted { pairs: u64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
