use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown weight family `{0}`")]
    UnknownFamily(String),

    #[error("invalid weight family `{spec}`: {reason}")]
    InvalidFamily { spec: String, reason: String },

    #[error("failed to read `{path}`: {reason}")]
    Io { path: String, reason: String },

    #[error("index {index} outside the tabulated range 0..={n_max}")]
    OutOfRange { index: usize, n_max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scan range is empty: {0}")]
    EmptyScan(String),

    #[error("condition constant `{0}` did not converge")]
    NotConverged(String),

    #[error("series has a nonzero coefficient at degree {degree} below the support floor {floor}")]
    SupportViolation { degree: usize, floor: usize },

    #[error("series is not invertible: coefficient {degree} is zero")]
    NotInvertible { degree: usize },

    #[error("degree caps differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
