use thiserror::Error;

#[derive(Debug, Error)]
pub enum GmcError {
    #[error("no data: at least one replica is required")]
    NoData,
    #[error("grid has {0} points; the dense sampler is limited to {max}", max = crate::sampler::MAX_POINTS)]
    TooManyPoints(usize),
    #[error("mollification radius must be positive and finite, got {0}")]
    BadRho(f64),
    #[error("mollified covariance is not positive definite at rho = {0} (rho too small for the grid spacing, or repeated points)")]
    NotPositiveDefinite(f64),
    #[error("the direct estimator needs neutral weights, total charge {0:?}")]
    NotNeutral([f64; 2]),
    #[error("weights outside the admissible set: {0}")]
    Seiberg(String),
    #[error("zero-mode integral diverges: {0}")]
    ZeroMode(String),
    #[error("bad distance ladder: {0}")]
    Ladder(String),
    #[error("bad options: {0}")]
    Options(String),
    #[error(transparent)]
    Config(#[from] w3_freefield::FreeFieldError),
}
