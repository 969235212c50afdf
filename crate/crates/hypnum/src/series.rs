use serde::Serialize;

use crate::error::NumError;
use crate::operator::{EulerOperator, HypParams};

const MAX_TERMS: usize = 200_000;
const REL_STOP: f64 = 1e-15;

/// Frobenius solution |u|^σ Σ cₙuⁿ, c₀ = 1, of the hypergeometric operator.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesSolution {
    pub params: HypParams,
    pub sigma: f64,
}

impl SeriesSolution {
    /// σ must be a root of the indicial polynomial, and no later denominator may vanish.
    pub fn new(params: &HypParams, sigma: f64) -> Result<Self, NumError> {
        // R(n+σ) = 0 for some n ≥ 1 iff another exponent sits a positive integer above σ
        for root in Self::exponents(params) {
            let gap = root - sigma;
            if gap >= 0.5 && (gap - gap.round()).abs() < 1e-12 {
                return Err(NumError::Resonance(gap.round() as usize));
            }
        }
        Ok(SeriesSolution {
            params: params.clone(),
            sigma,
        })
    }

    /// The three exponents {0, 1−B₁, 1−B₂}.
    pub fn exponents(params: &HypParams) -> [f64; 3] {
        [0.0, 1.0 - params.b[0], 1.0 - params.b[1]]
    }

    /// (f, f′, f″, f‴) at u.
    pub fn eval_derivs(&self, u: f64) -> Result<[f64; 4], NumError> {
        if !(u.abs() < 1.0) {
            return Err(NumError::Radius(u));
        }
        if u == 0.0 && self.sigma != 0.0 {
            return Err(NumError::SingularOrigin { sigma: self.sigma });
        }
        let op = EulerOperator::hypergeometric(&self.params);
        let s = self.sigma;
        let pref = if u == 0.0 { 1.0 } else { u.abs().powf(s) };
        // term n contributes cₙ·(n+σ)ₖ·u^{n−k} (falling factorial), times |u|^σ
        let mut sums = [0.0; 4];
        let mut c = 1.0;
        for n in 0..MAX_TERMS {
            if n > 0 {
                let (num, den) = op.recurrence_factors(s, n);
                if den == 0.0 {
                    return Err(NumError::Resonance(n));
                }
                c *= num / den;
            }
            let x = n as f64 + s;
            let mut fall = 1.0;
            let mut terms = [0.0; 4];
            for (k, t) in terms.iter_mut().enumerate() {
                if k > 0 {
                    fall *= x - (k - 1) as f64;
                }
                if c != 0.0 && fall != 0.0 {
                    *t = c * fall * power(u, n as i32 - k as i32);
                }
            }
            for k in 0..4 {
                sums[k] += terms[k];
            }
            if c == 0.0 {
                break;
            }
            let small =
                (0..4).all(|k| terms[k].abs() <= REL_STOP * sums[k].abs() || terms[k] == 0.0);
            if n > 3 && small {
                break;
            }
            if n + 1 == MAX_TERMS {
                return Err(NumError::SeriesStalled(MAX_TERMS));
            }
        }
        Ok(sums.map(|x| x * pref))
    }

    pub fn eval(&self, u: f64) -> Result<f64, NumError> {
        Ok(self.eval_derivs(u)?[0])
    }

    /// Relative residual of the operator applied to the series at u.
    pub fn residual(&self, u: f64) -> Result<f64, NumError> {
        let d = self.eval_derivs(u)?;
        let (r, scale) = EulerOperator::hypergeometric(&self.params).apply(u, &d);
        Ok(if scale == 0.0 { 0.0 } else { r.abs() / scale })
    }
}

fn power(u: f64, e: i32) -> f64 {
    if u == 0.0 {
        return if e == 0 { 1.0 } else { 0.0 };
    }
    u.powi(e)
}

/// Value of the Frobenius solution with exponent σ at u.
pub fn series_eval(params: &HypParams, sigma: f64, u: f64) -> Result<f64, NumError> {
    SeriesSolution::new(params, sigma)?.eval(u)
}
