use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("gamma function has a pole at {0}")]
    GammaPole(f64),
    #[error("degenerate coupling: gamma^2 = {0} hits a pole of Gamma(1 - gamma^2)")]
    DegenerateCoupling(f64),
    #[error("integral requires gamma^2 < 1, got gamma = {0}")]
    OutOfRange(f64),
    #[error("quadrature did not converge: achieved error {achieved:e}, wanted {wanted:e}")]
    Quadrature { achieved: f64, wanted: f64 },
    #[error("logarithmic case unsupported: recurrence denominator vanishes at n = {0}")]
    Resonance(usize),
    #[error("series requires |u| < 1, got {0}")]
    Radius(f64),
    #[error("series did not converge within {0} terms")]
    SeriesStalled(usize),
    #[error("exponent {sigma} is singular at u = 0")]
    SingularOrigin { sigma: f64 },
    #[error("integration path [{from}, {to}] meets a singular point of the operator")]
    SingularPath { from: f64, to: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
}
