use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("maze file line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A loaded maze violates one of the perfect-maze invariants.
    #[error("invalid maze: {0}")]
    InvalidMaze(String),

    #[error("path length {n} exceeds the supported cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },

    #[error("index {value} out of range for path length {n}")]
    IndexOutOfRange { value: u64, n: u32 },

    /// Nothing is marked: the Grover geometry is degenerate (k = 0).
    #[error("degenerate geometry: no basis state is marked")]
    Degenerate,

    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
