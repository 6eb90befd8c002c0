use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed cell {0:?}: repeated or out-of-range vertex")]
    MalformedCell(Vec<usize>),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("missing field value on cell {0:?}")]
    IncompleteField(Vec<usize>),
    #[error("element outside the logarithm domain (distance to identity {0:.3e})")]
    OutOfDomain(f64),
    #[error("generator {generator} does not apply to path {path:?}")]
    InapplicableGenerator { generator: String, path: Vec<usize> },
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: String, found: String },
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}
