use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("box ({row}, {col}) lies outside the diagram")]
    BoxOutsideDiagram { row: usize, col: usize },

    #[error("invalid Frobenius coordinates: {0}")]
    InvalidFrobenius(String),

    #[error("size {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("inadmissible parameters: {0}")]
    InadmissibleParameters(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of the function at {0}")]
    Pole(String),

    #[error("xi = {xi} exceeds the operational cap {cap}")]
    XiTooClose { xi: f64, cap: f64 },

    #[error("argument {arg} is outside the supported domain: {reason}")]
    Domain { arg: f64, reason: &'static str },

    #[error("point configuration contains duplicate points")]
    DuplicatePoints,

    #[error("point {0} is outside the phase space")]
    OutsidePhaseSpace(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("series failed to converge within {0} terms")]
    NoConvergence(usize),

    #[error("tolerance {tolerance:e} cannot be certified (best tail bound {bound:e})")]
    Uncertifiable { tolerance: f64, bound: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
