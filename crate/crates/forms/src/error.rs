use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("unsupported partition {got}; supported: {supported}")]
    UnsupportedPartition {
        got: String,
        supported: &'static str,
    },
    #[error("mixed levels: expected {expected}, found {found}")]
    MixedLevels { expected: u32, found: u32 },
    #[error("{coeffs} coefficients for {forms} forms")]
    LengthMismatch { coeffs: usize, forms: usize },
    #[error("W mode index {0} unsupported (1..=3)")]
    UnsupportedMode(i64),
    #[error("free-field realization violates {constraint}; residual: {residual}")]
    ConstraintViolated {
        constraint: String,
        residual: String,
    },
    #[error("Miura convention search admitted {0} conventions; expected exactly one")]
    ConventionNotUnique(usize),
    #[error("weight tag inconsistent with vector: {0}")]
    TagMismatch(String),
}
