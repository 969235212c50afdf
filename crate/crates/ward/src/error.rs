use thiserror::Error;
use w3_freefield::FreeFieldError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WardError {
    #[error("cosmological constants violate {0}")]
    MuCondition(String),
    #[error("expected exactly one fully degenerate boundary probe, found {0}")]
    Probe(usize),
    #[error("{0}")]
    Weights(String),
    #[error(transparent)]
    FreeField(#[from] FreeFieldError),
}
