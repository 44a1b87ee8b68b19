use thiserror::Error;

/// Errors shared by every layer of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mixed-field arithmetic: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weight-mismatched map: variable {source_var} (weight {source_weight}) sent to {target_var} (weight {target_weight})")]
    WeightMismatch {
        source_var: String,
        source_weight: u32,
        target_var: String,
        target_weight: u32,
    },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("non-homogeneous relation: {0}")]
    NonHomogeneous(String),

    #[error("monomial {monomial} has character {found}, expected {expected}")]
    CharacterMismatch {
        monomial: String,
        found: u32,
        expected: u32,
    },

    #[error("monomial {0} is not in the allowed support")]
    NotInSupport(String),

    #[error("monomial {0} is odd under the involution and excluded")]
    OddUnderInvolution(String),

    #[error("invalid building data: {0}")]
    BuildingData(String),

    #[error("non-integral invariant: {0}")]
    NonIntegral(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("structural constraint violated: {0}")]
    Structure(String),

    #[error("degenerate position: {0}")]
    DegeneratePosition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
