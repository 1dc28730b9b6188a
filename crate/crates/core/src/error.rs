use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid convex set: {0}")]
    InvalidSet(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid selection policy: {0}")]
    InvalidPolicy(String),

    #[error("family index {index} out of range for a family of {len} sets")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("point is not in the set")]
    NotInSet,

    #[error("no sample points of the set were found in the ball")]
    NoSamples,

    #[error("trace has no reference point")]
    MissingReference,

    #[error("trace has no retained iterates")]
    NoIterates,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ball B(a, r) is not contained in family set {index}: {reason}")]
    BallNotContained { index: usize, reason: String },

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
