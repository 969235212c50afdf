//! Third-order hypergeometric equations satisfied by correlators with a
//! boundary fully degenerate probe −χω₁.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use w3_algebra::{CartanVector, Couplings, GammaRational, Poly};
use w3_forms::Chi;
use w3_hypnum::HypParams;
use w3_singular::MuData;

use crate::error::WardError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// ⟨V_α(i) V_β*(∞) V_probe(t)⟩
    BulkBoundary,
    /// ⟨V_β₁(0) V_β*(1) V_β₂(∞) V_probe(t)⟩
    Boundary4pt,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bulk_boundary" => Ok(Family::BulkBoundary),
            "boundary_4pt" => Ok(Family::Boundary4pt),
            _ => Err(format!(
                "unknown family {s:?} (expected bulk_boundary or boundary_4pt)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variable {
    #[serde(rename = "u=1/(1+t^2)")]
    U,
    #[serde(rename = "t")]
    T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prefactor {
    /// |t − point|
    pub point: String,
    pub exponent: GammaRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypergeometricSpec {
    pub family: Family,
    pub chi: Chi,
    pub a: [GammaRational; 3],
    pub b: [GammaRational; 2],
    pub prefactors: Vec<Prefactor>,
    pub variable: Variable,
}

/// Weights in the (e₁, e₂) basis. The bulk-boundary family reads `alpha` and
/// `beta_star`; the 4-point family reads `beta1`, `beta2` and `beta_star`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpzWeights {
    #[serde(default, with = "pair")]
    pub alpha: Option<CartanVector>,
    #[serde(default, with = "pair")]
    pub beta1: Option<CartanVector>,
    #[serde(default, with = "pair")]
    pub beta2: Option<CartanVector>,
    #[serde(with = "pair")]
    pub beta_star: Option<CartanVector>,
}

mod pair {
    use serde::{Deserialize, Deserializer};
    use w3_algebra::{CartanVector, GammaRational};

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CartanVector>, D::Error> {
        let v: Option<[GammaRational; 2]> = Option::deserialize(d)?;
        Ok(v.map(|[a, b]| CartanVector::new(a, b)))
    }
}

/// Cosmological constants around the probe and the μ₁ values on either side
/// of the semi-degenerate boundary insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct BpzMu {
    pub probe: MuData,
    pub semi_mu1: [f64; 2],
}

impl BpzMu {
    pub fn vanishing(gamma: f64) -> Self {
        BpzMu {
            probe: MuData {
                gamma,
                mu_l: [0.0; 2],
                mu_r: [0.0; 2],
                mu_b1: 0.0,
            },
            semi_mu1: [0.0; 2],
        }
    }
}

const MU_TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MU_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Constraints on the boundary couplings around a fully degenerate insertion;
/// `Err` names the first violated one.
pub fn mu_condition(chi: Chi, mu: &MuData) -> Result<(), WardError> {
    if !close(mu.mu_l[1], mu.mu_r[1]) {
        return Err(WardError::MuCondition("mu_L2 = mu_R2".into()));
    }
    match chi {
        Chi::TwoOverGamma => {
            if !close(mu.mu_l[0], -mu.mu_r[0]) {
                return Err(WardError::MuCondition("mu_L1 = -mu_R1".into()));
            }
        }
        Chi::Gamma => {
            let t = PI * mu.gamma * mu.gamma / 2.0;
            let (l, r) = (mu.mu_l[0], mu.mu_r[0]);
            if !close(l * l + r * r - 2.0 * l * r * t.cos(), mu.mu_b1 * t.sin()) {
                return Err(WardError::MuCondition(
                    "mu_L1^2 + mu_R1^2 - 2 mu_L1 mu_R1 cos(pi gamma^2/2) = mu_B1 sin(pi gamma^2/2)"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

pub fn mu_condition_check(chi: Chi, mu: &MuData) -> bool {
    mu_condition(chi, mu).is_ok()
}

fn require(v: &Option<CartanVector>, name: &str) -> Result<CartanVector, WardError> {
    v.clone()
        .ok_or_else(|| WardError::Weights(format!("missing weight {name:?}")))
}

fn half(x: GammaRational) -> GammaRational {
    x * GammaRational::frac(1, 2)
}

pub fn bpz_spec(
    family: Family,
    weights: &BpzWeights,
    chi: Chi,
    mu: &BpzMu,
) -> Result<HypergeometricSpec, WardError> {
    mu_condition(chi, &mu.probe)?;
    if !close(mu.semi_mu1[0], mu.semi_mu1[1]) {
        return Err(WardError::MuCondition(
            "mu_1(s-) = mu_1(s+) at the semi-degenerate boundary insertion".into(),
        ));
    }
    let beta_star = require(&weights.beta_star, "beta_star")?;
    if !beta_star.pair_root(1).is_zero() {
        return Err(WardError::Weights(
            "beta_star must be a multiple of omega_2".into(),
        ));
    }
    let c = Couplings::symbolic();
    let q = c.background();
    let x = chi.symbolic();
    let probe = CartanVector::omega1().scale(&-x.clone());
    let h = CartanVector::h;
    match family {
        Family::BulkBoundary => {
            let alpha = require(&weights.alpha, "alpha")?;
            let shared = h(1).inner(
                &(alpha.scale(&GammaRational::int(2)) + beta_star.clone() + probe.clone()
                    - q.scale(&GammaRational::int(2))),
            );
            let quarter = x.clone() * GammaRational::frac(1, 4);
            let a = [1, 2, 3].map(|i| {
                quarter.clone() * shared.clone()
                    + half(x.clone()) * (h(1) - h(i)).inner(&(q.clone() - alpha.clone()))
            });
            let b2 = GammaRational::one()
                + quarter
                    * CartanVector::e2().inner(&(beta_star - q.scale(&GammaRational::int(2))));
            Ok(HypergeometricSpec {
                family,
                chi,
                a,
                b: [GammaRational::frac(1, 2), b2],
                prefactors: vec![Prefactor {
                    point: "i".into(),
                    exponent: -probe.inner(&alpha),
                }],
                variable: Variable::U,
            })
        }
        Family::Boundary4pt => {
            let b1 = require(&weights.beta1, "beta1")?;
            let b2 = require(&weights.beta2, "beta2")?;
            let shared = h(1).inner(
                &(b1.clone() + b2.clone() + probe + beta_star - q.scale(&GammaRational::int(2))),
            );
            let a = [1, 2, 3].map(|i| {
                half(x.clone()) * shared.clone()
                    + half(x.clone()) * (h(i) - h(1)).inner(&(b1.clone() - q.clone()))
            });
            let bb = [1, 2].map(|i| {
                GammaRational::one()
                    + half(x.clone()) * (h(1) - h(i)).inner(&(b2.clone() - q.clone()))
            });
            let w1 = CartanVector::omega1();
            Ok(HypergeometricSpec {
                family,
                chi,
                a,
                b: bb,
                prefactors: vec![
                    Prefactor {
                        point: "0".into(),
                        exponent: half(x.clone()) * w1.inner(&b1),
                    },
                    Prefactor {
                        point: "1".into(),
                        exponent: half(x) * w1.inner(&b2),
                    },
                ],
                variable: Variable::T,
            })
        }
    }
}

/// S(k, j): ways to split k labelled items into j blocks.
fn stirling2(k: usize, j: usize) -> i64 {
    let mut t = vec![vec![0i64; k + 1]; k + 1];
    t[0][0] = 1;
    for n in 1..=k {
        for m in 1..=n {
            t[n][m] = m as i64 * t[n - 1][m] + t[n - 1][m - 1];
        }
    }
    t[k][j]
}

impl HypergeometricSpec {
    /// (θ + B₁ − 1)(θ + B₂ − 1)θ with θ = u d/du.
    pub fn theta_polynomial(&self) -> Poly<GammaRational> {
        let theta = Poly::<GammaRational>::var();
        self.b.iter().fold(theta.clone(), |acc, b| {
            acc * (theta.clone() + Poly::constant(b.clone() - GammaRational::one()))
        })
    }

    /// Indicial polynomial at 0, obtained by rewriting the operator with
    /// ordinary derivatives (θᵏ = Σⱼ S(k,j) uʲ∂ʲ) and acting on u^σ.
    pub fn indicial_polynomial(&self) -> Poly<GammaRational> {
        let sigma = Poly::<GammaRational>::var();
        let r = self.theta_polynomial();
        let mut out = Poly::zero();
        for (k, rk) in r.coeffs().iter().enumerate() {
            for j in 0..=k {
                let falling = (0..j).fold(Poly::one(), |acc, i| {
                    acc * (sigma.clone() - Poly::constant(GammaRational::int(i as i64)))
                });
                out = out + falling.scale(&(rk.clone() * GammaRational::int(stirling2(k, j))));
            }
        }
        out
    }

    pub fn expected_exponents(&self) -> [GammaRational; 3] {
        let one = GammaRational::one();
        [
            GammaRational::zero(),
            one.clone() - self.b[0].clone(),
            one - self.b[1].clone(),
        ]
    }

    /// The indicial polynomial equals ∏(σ − σᵢ) over {0, 1 − B₁, 1 − B₂}.
    pub fn indicial_matches(&self) -> bool {
        let sigma = Poly::<GammaRational>::var();
        let expected = self
            .expected_exponents()
            .iter()
            .fold(Poly::one(), |acc, s| {
                acc * (sigma.clone() - Poly::constant(s.clone()))
            });
        let p = self.indicial_polynomial();
        p == expected
            && self
                .expected_exponents()
                .iter()
                .all(|s| p.eval(s).is_zero())
    }

    pub fn to_numeric(&self, gamma: f64) -> HypParams {
        HypParams {
            a: self.a.clone().map(|x| x.eval_f64(gamma)),
            b: self.b.clone().map(|x| x.eval_f64(gamma)),
        }
    }
}

impl fmt::Display for HypergeometricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A = ({}, {}, {}), B = ({}, {})",
            self.a[0], self.a[1], self.a[2], self.b[0], self.b[1]
        )
    }
}
