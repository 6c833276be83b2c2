use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported weight {0}")]
    UnsupportedWeight(i64),
    #[error("unsupported genus {0}")]
    UnsupportedGenus(usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not Minkowski reduced")]
    NotReduced,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("lambda is not in (1/{denominator})Z^g: {detail}")]
    BadDenominator { denominator: u64, detail: String },
    #[error("enumeration would exceed the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("coefficient at {what} lies outside the known precision {precision}")]
    OutOfPrecision { what: String, precision: String },
    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: i64, right: i64 },
    #[error("index mismatch: expected {expected}, got {got}")]
    IndexMismatch { expected: u64, got: u64 },
    #[error("series is not cuspidal")]
    NotCuspidal,
    #[error("form is not a cusp form")]
    NotCuspForm,
    #[error("form is not holomorphic")]
    NotHolomorphic,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("auxiliary cusp form is zero")]
    ZeroCuspForm,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("Q(f) does not vanish: {0}")]
    RelationFails(String),
    #[error("point is outside the upper half space: {0}")]
    NotInUpperHalfSpace(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
