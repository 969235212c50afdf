use thiserror::Error;
use w3_forms::FormError;
use w3_hypnum::NumError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularError {
    #[error("level {level} needs a {expected} weight, got {got}")]
    WrongTag {
        level: u8,
        expected: &'static str,
        got: String,
    },
    #[error("unsupported level {0}; expected 1, 2 or 3")]
    Level(u8),
    #[error("ratio undefined: conformal weight vanishes at {0}")]
    RatioUndefined(String),
    #[error("degenerate level-one system: L_-1 and W_-1 on {base} are proportional and {target} is {relation} their span")]
    Degenerate {
        base: String,
        target: String,
        relation: &'static str,
    },
    #[error("unknown constant {0:?}; expected c_gamma, c1 or c2")]
    UnknownConstant(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Num(#[from] NumError),
}
