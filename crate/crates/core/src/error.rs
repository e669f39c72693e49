use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("graph does not meet the standing hypotheses: {0}")]
    Hypothesis(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("bad word token `{0}` (expected `<edge>-` or `<edge>+`)")]
    BadToken(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("state cap of {cap} reachable elements exceeded at word length {n}")]
    StateCap { n: usize, cap: usize },

    #[error("count table horizon {have} too small, need {need}")]
    Horizon { have: usize, need: usize },

    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("counting invariant violated: {0}")]
    Internal(String),

    #[error("json parse error at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
