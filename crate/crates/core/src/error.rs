use thiserror::Error;

/// Errors raised by the generators, solvers and file parsers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no centers")]
    NoCenters,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("state {state} out of range (must be < {limit})")]
    StateOutOfRange { state: usize, limit: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("locked sets differ between operands")]
    LockMismatch,
    #[error("position {0} is locked")]
    LockedPosition(usize),
    #[error("position {0} out of range")]
    PositionOutOfRange(usize),
    #[error("value out of the gene's range")]
    ValueOutOfRange,
    #[error("single-parent crossover requested but no ancestors were supplied")]
    MissingAncestors,
    #[error("no substrate")]
    NoSubstrate,
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("empty coverage")]
    EmptyCoverage,
    #[error("instance too large for exact solver")]
    TooLarge,
    #[error("area mismatch: pieces cover {pieces} cells, region has {region}")]
    AreaMismatch { pieces: usize, region: usize },
    #[error("pieces admit no tiling of the rectangle")]
    NoTiling,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
