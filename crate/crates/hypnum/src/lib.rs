//! Floating-point layer: Gamma functions, three special integrals with known
//! closed forms, and the order-three hypergeometric operator solved both by
//! Frobenius series and by direct integration.

mod error;
mod gamma;
mod integrals;
mod ode;
mod operator;
mod series;

pub use error::NumError;
pub use gamma::{closed_forms, g_constant, gamma_fn};
pub use integrals::{
    beta_weighted, integral_line, integral_minus, integral_plus, special_integrals, IntegralPair,
    Quad, QUAD_TOL,
};
pub use ode::{frobenius_condition, ode_integrate, ODE_RTOL};
pub use operator::{EulerOperator, HypParams, ThetaPoly};
pub use series::{series_eval, SeriesSolution};
