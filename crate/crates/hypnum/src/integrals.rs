//! Quadrature of the three half-line integrals behind the equation-of-motion
//! constants. Each is folded onto [0,1] by y ↦ 1/y and then split at ½, with a
//! power substitution on each half removing the algebraic endpoint singularity,
//! so the double-exponential rule only ever sees smooth integrands.

use serde::Serialize;

use crate::error::NumError;
use crate::gamma::closed_forms;

pub const QUAD_TOL: f64 = 1e-13;

#[derive(Clone, Debug, Serialize)]
pub struct IntegralPair {
    pub name: &'static str,
    pub numeric: f64,
    pub closed_form: f64,
    pub error_estimate: f64,
}

impl IntegralPair {
    pub fn rel_diff(&self) -> f64 {
        ((self.numeric - self.closed_form) / self.closed_form).abs()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

fn de(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quad, NumError> {
    let out = quadrature::integrate(f, a, b, tol);
    if !(out.error_estimate <= tol) || !out.integral.is_finite() {
        return Err(NumError::Quadrature {
            achieved: out.error_estimate,
            wanted: tol,
        });
    }
    Ok(Quad {
        value: out.integral,
        error: out.error_estimate,
    })
}

/// ∫₀¹ x^{p−1}(1−x)^{q−1} f(x) dx for p, q > 0 and f smooth on [0,1].
pub fn beta_weighted(p: f64, q: f64, f: impl Fn(f64) -> f64, tol: f64) -> Result<Quad, NumError> {
    // x = v^{1/p} on [0,½]: dx·x^{p−1} = dv/p
    let left = de(
        |v| f(v.powf(1.0 / p)) * (1.0 - v.powf(1.0 / p)).powf(q - 1.0) / p,
        0.0,
        0.5f64.powf(p),
        tol,
    )?;
    // 1−x = w^{1/q} on [½,1]
    let right = de(
        |w| f(1.0 - w.powf(1.0 / q)) * (1.0 - w.powf(1.0 / q)).powf(p - 1.0) / q,
        0.0,
        0.5f64.powf(q),
        tol,
    )?;
    Ok(left + right)
}

/// ∫₁^∞ y^{−1+g/2}(y−1)^{−g} dy = ∫₀¹ x^{g/2−1}(1−x)^{−g} dx.
pub fn integral_minus(gamma: f64, tol: f64) -> Result<Quad, NumError> {
    let g = check(gamma)?;
    beta_weighted(g / 2.0, 1.0 - g, |_| 1.0, tol)
}

/// ∫₁^∞ y^{−1+g/2}(y+1)^{−g} dy = ∫₀¹ x^{g/2−1}(1+x)^{−g} dx.
pub fn integral_plus(gamma: f64, tol: f64) -> Result<Quad, NumError> {
    let g = check(gamma)?;
    beta_weighted(g / 2.0, 1.0, |x| (1.0 + x).powf(-g), tol)
}

/// ∫_ℝ (1+x²)^{−1+g/2} dx = 2∫₀¹ (1+x²)^{−1+g/2} dx + 2∫₀¹ y^{−g}(1+y²)^{−1+g/2} dy.
pub fn integral_line(gamma: f64, tol: f64) -> Result<Quad, NumError> {
    let g = check(gamma)?;
    let f = |x: f64| (1.0 + x * x).powf(g / 2.0 - 1.0);
    let inner = de(f, 0.0, 1.0, tol / 4.0)?;
    let outer = beta_weighted(1.0 - g, 1.0, f, tol / 4.0)?;
    let s = inner + outer;
    Ok(Quad {
        value: 2.0 * s.value,
        error: 2.0 * s.error,
    })
}

fn check(gamma: f64) -> Result<f64, NumError> {
    let g = gamma * gamma;
    if !(gamma > 0.0 && g < 1.0) {
        return Err(NumError::OutOfRange(gamma));
    }
    Ok(g)
}

/// The three (quadrature, closed form) pairs at γ ∈ (0,1).
pub fn special_integrals(gamma: f64) -> Result<[IntegralPair; 3], NumError> {
    let closed = closed_forms(gamma)?;
    let pair = |name, q: Quad, c| IntegralPair {
        name,
        numeric: q.value,
        closed_form: c,
        error_estimate: q.error,
    };
    Ok([
        pair(
            "y^(g/2-1) (y-1)^(-g) on (1,inf)",
            integral_minus(gamma, QUAD_TOL)?,
            closed[0],
        ),
        pair(
            "y^(g/2-1) (y+1)^(-g) on (1,inf)",
            integral_plus(gamma, QUAD_TOL)?,
            closed[1],
        ),
        pair(
            "(1+x^2)^(g/2-1) on R",
            integral_line(gamma, QUAD_TOL)?,
            closed[2],
        ),
    ])
}
