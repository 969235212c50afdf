use std::f64::consts::PI;

use crate::error::NumError;

/// Γ(x); an error at the non-positive integers.
pub fn gamma_fn(x: f64) -> Result<f64, NumError> {
    if x <= 0.0 && x == x.round() {
        return Err(NumError::GammaPole(x));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// Γ(g/2)Γ(1−g)/Γ(1−g/2) with g = γ², the constant shared by the three integrals
/// and the equation-of-motion constants.
pub fn g_constant(gamma: f64) -> Result<f64, NumError> {
    let g = gamma * gamma;
    let pole = |e: NumError| match e {
        NumError::GammaPole(_) => NumError::DegenerateCoupling(g),
        e => e,
    };
    Ok(
        gamma_fn(g / 2.0).map_err(pole)? * gamma_fn(1.0 - g).map_err(pole)?
            / gamma_fn(1.0 - g / 2.0).map_err(pole)?,
    )
}

/// The closed forms G, cos(πg/2)·G and 2^g·sin(πg/2)·G.
pub fn closed_forms(gamma: f64) -> Result<[f64; 3], NumError> {
    let g = gamma * gamma;
    let c = g_constant(gamma)?;
    let t = PI * g / 2.0;
    Ok([c, t.cos() * c, 2f64.powf(g) * t.sin() * c])
}
