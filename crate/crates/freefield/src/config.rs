//! Insertion data shared by the exact, Ward and Monte Carlo layers.

use num_complex::Complex;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use w3_algebra::{q_to_f64, CartanVector, Couplings, GammaRational, Q};
use w3_forms::{Weight, WeightTag};

use crate::error::FreeFieldError;

#[derive(Clone, Debug, PartialEq)]
pub struct BulkInsertion {
    pub z: Complex<Q>,
    pub alpha: Weight,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryInsertion {
    pub s: Q,
    pub beta: Weight,
}

/// Bulk and boundary insertions with piecewise-constant boundary couplings.
///
/// Arc `l` runs from `s_l` to `s_{l+1}`; the last arc wraps through infinity
/// back to `s_0`. Without boundary insertions there is a single arc.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorConfig {
    pub gamma: Q,
    pub bulk: Vec<BulkInsertion>,
    pub boundary: Vec<BoundaryInsertion>,
    pub mu_bulk: [f64; 2],
    pub mu_boundary: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct WireBulk {
    z: [GammaRational; 2],
    alpha: [GammaRational; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<WeightTag>,
}

#[derive(Serialize, Deserialize)]
struct WireBoundary {
    s: GammaRational,
    beta: [GammaRational; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<WeightTag>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireConfig {
    gamma: GammaRational,
    #[serde(default)]
    bulk: Vec<WireBulk>,
    #[serde(default)]
    boundary: Vec<WireBoundary>,
    #[serde(default)]
    mu_bulk: [f64; 2],
    #[serde(default)]
    mu_boundary: Vec<[f64; 2]>,
}

fn exact(g: &GammaRational, pointer: String) -> Result<Q, FreeFieldError> {
    g.as_constant().ok_or_else(|| {
        FreeFieldError::config(
            pointer,
            "position must be a number, not a function of gamma",
        )
    })
}

fn weight(
    v: &[GammaRational; 2],
    tag: Option<WeightTag>,
    pointer: String,
) -> Result<Weight, FreeFieldError> {
    let w = Weight {
        vector: CartanVector::new(v[0].clone(), v[1].clone()),
        tag: tag.unwrap_or(WeightTag::Generic),
    };
    w.validate()
        .map_err(|e| FreeFieldError::config(pointer, e.to_string()))?;
    Ok(w)
}

impl CorrelatorConfig {
    pub fn new(
        gamma: Q,
        bulk: Vec<BulkInsertion>,
        boundary: Vec<BoundaryInsertion>,
    ) -> Result<Self, FreeFieldError> {
        let arcs = boundary.len().max(1);
        let cfg = CorrelatorConfig {
            gamma,
            bulk,
            boundary,
            mu_bulk: [0.0; 2],
            mu_boundary: vec![[0.0; 2]; arcs],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, FreeFieldError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let wire: WireConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = format!(
                "/{}",
                e.path()
                    .to_string()
                    .replace('.', "/")
                    .replace('[', "/")
                    .replace(']', "")
            );
            FreeFieldError::config(pointer, e.inner().to_string())
        })?;
        let gamma = exact(&wire.gamma, "/gamma".into())?;
        let mut bulk = Vec::new();
        for (k, b) in wire.bulk.into_iter().enumerate() {
            let z = Complex::new(
                exact(&b.z[0], format!("/bulk/{k}/z/0"))?,
                exact(&b.z[1], format!("/bulk/{k}/z/1"))?,
            );
            bulk.push(BulkInsertion {
                z,
                alpha: weight(&b.alpha, b.tag, format!("/bulk/{k}/alpha"))?,
            });
        }
        let mut boundary = Vec::new();
        for (l, b) in wire.boundary.into_iter().enumerate() {
            let s = exact(&b.s, format!("/boundary/{l}/s"))?;
            boundary.push(BoundaryInsertion {
                s,
                beta: weight(&b.beta, b.tag, format!("/boundary/{l}/beta"))?,
            });
        }
        let mut mu_boundary = wire.mu_boundary;
        if mu_boundary.is_empty() {
            mu_boundary = vec![[0.0; 2]; boundary.len().max(1)];
        }
        let cfg = CorrelatorConfig {
            gamma,
            bulk,
            boundary,
            mu_bulk: wire.mu_bulk,
            mu_boundary,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pair = |v: &CartanVector| [v.c1.clone(), v.c2.clone()];
        let tag = |w: &Weight| (w.tag != WeightTag::Generic).then(|| w.tag.clone());
        let wire = WireConfig {
            gamma: GammaRational::constant(self.gamma.clone()),
            bulk: self
                .bulk
                .iter()
                .map(|b| WireBulk {
                    z: [
                        GammaRational::constant(b.z.re.clone()),
                        GammaRational::constant(b.z.im.clone()),
                    ],
                    alpha: pair(&b.alpha.vector),
                    tag: tag(&b.alpha),
                })
                .collect(),
            boundary: self
                .boundary
                .iter()
                .map(|b| WireBoundary {
                    s: GammaRational::constant(b.s.clone()),
                    beta: pair(&b.beta.vector),
                    tag: tag(&b.beta),
                })
                .collect(),
            mu_bulk: self.mu_bulk,
            mu_boundary: self.mu_boundary.clone(),
        };
        serde_json::to_value(wire).expect("plain data")
    }

    pub fn validate(&self) -> Result<(), FreeFieldError> {
        let g = q_to_f64(&self.gamma);
        if !self.gamma.is_positive()
            || self.gamma.clone() * self.gamma.clone() >= Q::from_integer(2.into())
        {
            return Err(FreeFieldError::config(
                "/gamma",
                format!("gamma must lie in (0, sqrt 2), got {g}"),
            ));
        }
        for (k, b) in self.bulk.iter().enumerate() {
            if !b.z.im.is_positive() {
                return Err(FreeFieldError::config(
                    format!("/bulk/{k}/z"),
                    "bulk point must lie in the open upper half-plane",
                ));
            }
        }
        for (l, w) in self.boundary.windows(2).enumerate() {
            if w[0].s >= w[1].s {
                return Err(FreeFieldError::config(
                    format!("/boundary/{}/s", l + 1),
                    "boundary points must be strictly increasing",
                ));
            }
        }
        if self.mu_boundary.len() != self.arcs() {
            return Err(FreeFieldError::config(
                "/mu_boundary",
                format!(
                    "expected {} arcs, got {}",
                    self.arcs(),
                    self.mu_boundary.len()
                ),
            ));
        }
        let mus = self.mu_bulk.iter().chain(self.mu_boundary.iter().flatten());
        if mus.clone().any(|m| !m.is_finite()) || self.mu_bulk.iter().any(|m| *m < 0.0) {
            return Err(FreeFieldError::config(
                "/mu_bulk",
                "bulk cosmological constants must be finite and non-negative",
            ));
        }
        for b in self
            .bulk
            .iter()
            .map(|b| &b.alpha)
            .chain(self.boundary.iter().map(|b| &b.beta))
        {
            if b.vector.c1.eval_q(&self.gamma).is_none()
                || b.vector.c2.eval_q(&self.gamma).is_none()
            {
                return Err(FreeFieldError::PoleAtCoupling);
            }
        }
        Ok(())
    }

    pub fn arcs(&self) -> usize {
        self.boundary.len().max(1)
    }

    /// (μ(s_l⁻), μ(s_l⁺)) at boundary point `l`.
    pub fn mu_around(&self, l: usize) -> ([f64; 2], [f64; 2]) {
        let n = self.arcs();
        (self.mu_boundary[(l + n - 1) % n], self.mu_boundary[l % n])
    }

    pub fn is_free(&self) -> bool {
        self.mu_bulk
            .iter()
            .chain(self.mu_boundary.iter().flatten())
            .all(|m| *m == 0.0)
    }

    pub fn couplings(&self) -> Couplings<Q> {
        Couplings::from_gamma(self.gamma.clone())
    }

    fn eval(&self, v: &CartanVector) -> CartanVector<Q> {
        v.map(|g| g.eval_q(&self.gamma).expect("validated"))
    }

    pub fn bulk_weights(&self) -> Vec<CartanVector<Q>> {
        self.bulk
            .iter()
            .map(|b| self.eval(&b.alpha.vector))
            .collect()
    }

    pub fn boundary_weights(&self) -> Vec<CartanVector<Q>> {
        self.boundary
            .iter()
            .map(|b| self.eval(&b.beta.vector))
            .collect()
    }

    /// s = Σα_k + ½Σβ_l − Q at the configured γ.
    pub fn total_charge(&self) -> CartanVector<Q> {
        let half = Q::new(1.into(), 2.into());
        let a = self
            .bulk_weights()
            .into_iter()
            .fold(CartanVector::zero(), |acc, w| acc + w);
        let b = self
            .boundary_weights()
            .into_iter()
            .fold(CartanVector::zero(), |acc, w| acc + w);
        a + b.scale(&half) - self.couplings().background()
    }

    pub fn neutral(&self) -> bool {
        self.total_charge().is_zero()
    }

    /// ⟨s,ωᵢ⟩ > 0 and ⟨A_k − Q, eᵢ⟩ < 0 for every entry of the doubled list.
    pub fn seiberg_ok(&self) -> bool {
        let s = self.total_charge();
        let (a, b) = s.to_omega_basis();
        let q = self.couplings().background();
        let bounded = self
            .bulk_weights()
            .into_iter()
            .chain(self.boundary_weights())
            .all(|w| (1..=2).all(|i| (w.clone() - q.clone()).pair_root(i).is_negative()));
        a.is_positive() && b.is_positive() && bounded
    }
}
