use nalgebra::{Matrix3, Vector3};
use ode_solvers::{Dopri5, OutputType, System};

use crate::error::NumError;
use crate::operator::{EulerOperator, HypParams};
use crate::series::SeriesSolution;

pub const ODE_RTOL: f64 = 1e-10;
/// Absolute floor per unit of initial data; exactly vanishing components
/// (polynomial solutions) otherwise turn round-off in f‴ into rejected steps.
const ODE_ATOL: f64 = 1e-12;

struct Companion(EulerOperator);

impl System<f64, Vector3<f64>> for Companion {
    fn system(&self, u: f64, y: &Vector3<f64>, dy: &mut Vector3<f64>) {
        let q = self.0.derivative_form(u);
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = -(q[0] * y[0] + q[1] * y[1] + q[2] * y[2]) / q[3];
    }
}

/// Carry (f, f′, f″) from u₀ to u₁ along the real segment, which must avoid 0 and 1.
pub fn ode_integrate(
    params: &HypParams,
    u0: f64,
    init: [f64; 3],
    u1: f64,
) -> Result<[f64; 3], NumError> {
    let (lo, hi) = (u0.min(u1), u0.max(u1));
    if (lo <= 0.0 && 0.0 <= hi) || (lo <= 1.0 && 1.0 <= hi) {
        return Err(NumError::SingularPath { from: u0, to: u1 });
    }
    if u0 == u1 {
        return Ok(init);
    }
    let op = EulerOperator::hypergeometric(params);
    let y0 = Vector3::from(init);
    // the stiffness heuristic misfires on polynomial solutions; these operators are not stiff away from {0, 1}
    let span = (u1 - u0).abs();
    let mut solver = Dopri5::from_param(
        Companion(op),
        u0,
        u1,
        u1 - u0,
        y0,
        ODE_RTOL,
        ODE_ATOL * init.iter().fold(1.0f64, |m, x| m.max(x.abs())),
        0.9,
        0.0,
        0.333,
        6.0,
        span,
        0.0,
        100_000,
        u32::MAX,
        OutputType::Sparse,
    );
    solver
        .integrate()
        .map_err(|e| NumError::Integration(e.to_string()))?;
    let (xs, ys) = solver.results().get();
    match (xs.last(), ys.last()) {
        (Some(&x), Some(y)) if (x - u1).abs() <= 1e-12 * u1.abs().max(1.0) => {
            Ok([y[0], y[1], y[2]])
        }
        _ => Err(NumError::Integration(
            "solver stopped short of the target".into(),
        )),
    }
}

/// Value/derivative matrix of the three Frobenius solutions at u₀ and its
/// 2-norm condition number.
pub fn frobenius_condition(params: &HypParams, u0: f64) -> Result<(Matrix3<f64>, f64), NumError> {
    let mut m = Matrix3::zeros();
    for (i, sigma) in SeriesSolution::exponents(params).into_iter().enumerate() {
        let d = SeriesSolution::new(params, sigma)?.eval_derivs(u0)?;
        for j in 0..3 {
            m[(i, j)] = d[j];
        }
    }
    let sv = m.singular_values();
    let cond = sv.max() / sv.min();
    Ok((m, cond))
}
