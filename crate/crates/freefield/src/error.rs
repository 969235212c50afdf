use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeFieldError {
    #[error("config error at {pointer}: {message}")]
    Config { pointer: String, message: String },
    #[error("free-field closed form requires neutrality (total charge {0})")]
    NotNeutral(String),
    #[error("probe collides with insertion {0}")]
    ProbeCollision(usize),
    #[error("cosmological constants must vanish for the free-field calculus")]
    NonzeroMu,
    #[error("weight is singular at the chosen coupling")]
    PoleAtCoupling,
    #[error(transparent)]
    Form(#[from] w3_forms::FormError),
}

impl FreeFieldError {
    pub(crate) fn config(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        FreeFieldError::Config {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
