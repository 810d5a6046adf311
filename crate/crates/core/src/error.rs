use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("crease label must contain exactly one zero component, got {0:?}")]
    InvalidLabel(Vec<i8>),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("orthant label entries must be +1 or -1, got {0:?}")]
    InvalidOrthant(Vec<i8>),

    #[error("face {0} lies outside the pattern extent")]
    FaceOutOfExtent(String),

    #[error("cell budget exceeded: {requested} cells requested, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },

    #[error("letter at {position:?} has parity bits {found:#b}, expected {expected:#b}")]
    ParityMismatch {
        position: Vec<i64>,
        expected: u16,
        found: u16,
    },

    #[error("invalid block substitution: {0}")]
    InvalidRule(String),

    #[error("invalid symbolic pattern: {0}")]
    InvalidPattern(String),

    #[error("window of side {window} does not fit in a pattern of side {side}")]
    WindowTooLarge { window: usize, side: usize },

    #[error("{0} is outside the stated range of the formula")]
    FormulaRange(u64),

    #[error("collared alphabet did not close within {0} substitution steps")]
    CollaringNotClosed(usize),

    #[error("substitution is not primitive within {0} iterations")]
    NotPrimitive(usize),

    #[error("cell complex is inconsistent: {0}")]
    InvalidComplex(String),

    #[error("endomorphism is not well defined on the group: {0}")]
    IllDefinedEndomorphism(String),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
