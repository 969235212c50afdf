//! Order-three operators of the shape u·P(θ) − R(θ), θ = u d/du, with P and R
//! monic cubics given by their linear factors. The Frobenius recurrence, the
//! indicial polynomial and the ordinary-derivative form of the ODE are all read
//! off the two θ-polynomials rather than written down by hand.

use serde::{Deserialize, Serialize};

/// Real parameters of [u(A₁+θ)(A₂+θ)(A₃+θ) − (B₁−1+θ)(B₂−1+θ)θ].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypParams {
    pub a: [f64; 3],
    pub b: [f64; 2],
}

/// Polynomial in θ, low degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaPoly(pub Vec<f64>);

impl ThetaPoly {
    /// ∏(θ + rᵢ)
    pub fn from_shifts(shifts: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in shifts {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &x) in c.iter().enumerate() {
                next[i] += r * x;
                next[i + 1] += x;
            }
            c = next;
        }
        ThetaPoly(c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

/// Stirling numbers of the second kind: θᵏ = Σⱼ S(k,j) uʲ dʲ/duʲ.
fn stirling2(k: usize, j: usize) -> f64 {
    match (k, j) {
        (0, 0) => 1.0,
        (_, 0) | (0, _) => 0.0,
        _ if j > k => 0.0,
        _ => j as f64 * stirling2(k - 1, j) + stirling2(k - 1, j - 1),
    }
}

#[derive(Clone, Debug)]
pub struct EulerOperator {
    /// multiplies u
    pub p: ThetaPoly,
    pub r: ThetaPoly,
}

impl EulerOperator {
    pub fn hypergeometric(params: &HypParams) -> Self {
        let [b1, b2] = params.b;
        EulerOperator {
            p: ThetaPoly::from_shifts(&params.a),
            r: ThetaPoly::from_shifts(&[b1 - 1.0, b2 - 1.0, 0.0]),
        }
    }

    pub fn order(&self) -> usize {
        self.p.degree().max(self.r.degree())
    }

    /// Acting on u^{n+σ}: u^{n+σ}·(u·P(n+σ) − R(n+σ)), so the series Σcₙu^{n+σ}
    /// satisfies R(n+σ)cₙ = P(n+σ−1)cₙ₋₁.
    pub fn recurrence_factors(&self, sigma: f64, n: usize) -> (f64, f64) {
        let x = n as f64 + sigma;
        (self.p.eval(x - 1.0), self.r.eval(x))
    }

    /// The indicial polynomial at u = 0 is R itself.
    pub fn indicial(&self) -> &ThetaPoly {
        &self.r
    }

    /// Coefficients qⱼ(u) of Σⱼ qⱼ(u) f⁽ʲ⁾(u) = 0.
    pub fn derivative_form(&self, u: f64) -> Vec<f64> {
        let n = self.order();
        (0..=n)
            .map(|j| {
                let s: f64 = (j..=n)
                    .map(|k| {
                        let pk = self.p.0.get(k).copied().unwrap_or(0.0);
                        let rk = self.r.0.get(k).copied().unwrap_or(0.0);
                        (u * pk - rk) * stirling2(k, j)
                    })
                    .sum();
                s * u.powi(j as i32)
            })
            .collect()
    }

    /// Σⱼ qⱼ(u) f⁽ʲ⁾ and the scale (Σⱼ |qⱼ|)·maxⱼ |f⁽ʲ⁾| for relative
    /// comparisons. Σⱼ |qⱼ f⁽ʲ⁾| would not do: at points where every term
    /// vanishes it measures rounding only.
    pub fn apply(&self, u: f64, derivs: &[f64]) -> (f64, f64) {
        let q = self.derivative_form(u);
        let r = q.iter().zip(derivs).map(|(q, f)| q * f).sum();
        let qs: f64 = q.iter().map(|x| x.abs()).sum();
        let fs = derivs
            .iter()
            .take(q.len())
            .fold(0.0f64, |m, f| m.max(f.abs()));
        (r, qs * fs)
    }
}
