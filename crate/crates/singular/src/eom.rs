//! Right-hand sides of the higher equations of motion: what the singular
//! vectors equal inside correlators when the boundary couplings jump at the
//! insertion point.

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;
use w3_algebra::{q_to_f64, CartanVector, Couplings, GammaRational, Ring};
use w3_forms::{Chi, FieldPolynomial, Weight, WeightTag};
use w3_freefield::CorrelatorConfig;
use w3_hypnum::g_constant;

use crate::d1::{level_three_instance, level_two_instance, solve_d1, D1Solution};
use crate::error::SingularError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EomConstant {
    CGamma,
    C1,
    C2,
}

impl FromStr for EomConstant {
    type Err = SingularError;
    fn from_str(s: &str) -> Result<Self, SingularError> {
        match s {
            "c_gamma" | "c" => Ok(EomConstant::CGamma),
            "c1" | "c1_gamma" => Ok(EomConstant::C1),
            "c2" | "c2_gamma" => Ok(EomConstant::C2),
            other => Err(SingularError::UnknownConstant(other.into())),
        }
    }
}

/// Boundary couplings to the left and right of the insertion, plus μ_{B,1}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuData {
    pub gamma: f64,
    pub mu_l: [f64; 2],
    pub mu_r: [f64; 2],
    pub mu_b1: f64,
}

impl MuData {
    /// Couplings around boundary insertion `l` of a configuration.
    pub fn at_boundary(cfg: &CorrelatorConfig, l: usize) -> Self {
        let (mu_l, mu_r) = cfg.mu_around(l);
        MuData {
            gamma: q_to_f64(&cfg.gamma),
            mu_l,
            mu_r,
            mu_b1: cfg.mu_bulk[0],
        }
    }
}

/// c_γ, c¹_γ = −μ_{B,1} sin(πγ²/2)·G·𝟙_{γ<1}, c²_γ = (μ²_{L,1} − 2μ_{L,1}μ_{R,1}cos(πγ²/2) + μ²_{R,1})·G·𝟙_{γ<1}.
pub fn eom_constant(
    name: EomConstant,
    gamma: f64,
    mu_l1: f64,
    mu_r1: f64,
    mu_b1: f64,
) -> Result<f64, SingularError> {
    let g = g_constant(gamma)?;
    let t = PI * gamma * gamma / 2.0;
    let quad = mu_l1 * mu_l1 + mu_r1 * mu_r1 - 2.0 * mu_l1 * mu_r1 * t.cos();
    let bulk = -mu_b1 * t.sin();
    let below = if gamma < 1.0 { 1.0 } else { 0.0 };
    Ok(match name {
        EomConstant::CGamma => (quad + bulk) * g,
        EomConstant::C1 => bulk * g * below,
        EomConstant::C2 => quad * g * below,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Field {
    Primary {
        weight: CartanVector,
    },
    /// D₋₁ applied to V_weight
    D1 {
        weight: CartanVector,
        operator: D1Solution,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct EomTerm {
    pub formula: String,
    pub coefficient: f64,
    pub field: Field,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EomStatus {
    Covered,
    NotCovered { reason: String },
}

/// Second-order descendant coefficients attached to V_{β+γe₂} at level three.
/// Taken as stated; nothing in this crate checks them.
#[derive(Clone, Debug, Serialize)]
pub struct D2Table {
    pub unverified: bool,
    pub form: FieldPolynomial,
}

#[derive(Clone, Debug, Serialize)]
pub struct EomRhs {
    pub level: u8,
    pub weight: Weight,
    pub status: EomStatus,
    pub terms: Vec<EomTerm>,
    /// true when every coefficient vanishes, i.e. the singular vector is null
    pub null: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2_table: Option<D2Table>,
}

fn gr_f(x: &GammaRational, gamma: f64) -> f64 {
    x.eval_f64(gamma)
}

/// ⟨v₁, ∂²Φ⟩ + B(∂Φ, ∂Φ) for the level-three descendant of V_{β+γe₂}.
pub fn d2_table(chi: Chi) -> D2Table {
    let c = Couplings::symbolic();
    let x = chi.symbolic();
    let g = GammaRational::gamma();
    let beta = CartanVector::omega1().scale(&-x.clone());
    let ge2 = CartanVector::e2().scale(&g);
    let k8 = GammaRational::int(8) / x.pow(3);
    let k4 = GammaRational::int(4) / x;
    let v1 = (beta.scale(&GammaRational::int(3)) + ge2.clone()).scale(&k8)
        + (c.background() + beta.clone() + ge2.clone()).scale(&k4);
    let lb = FieldPolynomial::linear(&beta, 1);
    let le = FieldPolynomial::linear(&ge2, 1);
    let quad = lb
        .mul(&lb)
        .scale(&GammaRational::int(3))
        .checked_add(&lb.mul(&le).scale(&GammaRational::int(3)))
        .and_then(|p| p.checked_add(&le.mul(&le)))
        .expect("level 2");
    let form = FieldPolynomial::linear(&v1, 2)
        .checked_add(&quad.scale(&k8))
        .and_then(|p| p.checked_add_scaled(&-k4, &FieldPolynomial::pairing(1, 1)))
        .expect("level 2");
    D2Table {
        unverified: true,
        form,
    }
}

pub fn eom_rhs(level: u8, weight: &Weight, mu: &MuData) -> Result<EomRhs, SingularError> {
    weight.validate()?;
    let gamma = mu.gamma;
    let gsym = GammaRational::gamma();
    let [l1, l2] = mu.mu_l;
    let [r1, r2] = mu.mu_r;
    let shift = |i: u8, k: i64| {
        let e = if i == 1 {
            CartanVector::e1()
        } else {
            CartanVector::e2()
        };
        weight.vector.clone() + e.scale(&(gsym.clone() * GammaRational::int(k)))
    };
    let wrong = |expected| SingularError::WrongTag {
        level,
        expected,
        got: format!("{:?}", weight.tag),
    };
    let mut d2 = None;
    let (status, terms) = match (level, &weight.tag) {
        (1, WeightTag::SemiDegenerate { index, kappa }) => {
            let q = 2.0 / gamma + gamma;
            let k = gr_f(kappa, gamma);
            // κω₂ is the mirror image of κω₁ under e₁ ↔ e₂, which flips the sign of W
            let (jump, other, sign, formula) = if *index == 1 {
                (l2 - r2, 2, 1.0, "2(q-kappa)(mu_L2-mu_R2)")
            } else {
                (l1 - r1, 1, -1.0, "-2(q-kappa)(mu_L1-mu_R1)")
            };
            let term = EomTerm {
                formula: formula.into(),
                coefficient: sign * 2.0 * (q - k) * jump,
                field: Field::Primary {
                    weight: shift(other, 1),
                },
            };
            (EomStatus::Covered, vec![term])
        }
        (2, WeightTag::FullyDegenerate { chi }) => {
            let (t, b) = level_two_instance(*chi);
            let d1 = solve_d1(&t, &b)?;
            let first = EomTerm {
                formula: match chi {
                    Chi::TwoOverGamma => "2 gamma (mu_R2-mu_L2)",
                    Chi::Gamma => "(4/gamma)(mu_R2-mu_L2)",
                }
                .into(),
                coefficient: match chi {
                    Chi::TwoOverGamma => 2.0 * gamma * (r2 - l2),
                    Chi::Gamma => 4.0 / gamma * (r2 - l2),
                },
                field: Field::D1 {
                    weight: shift(2, 1),
                    operator: d1,
                },
            };
            let second = match chi {
                Chi::TwoOverGamma => EomTerm {
                    formula: "2(2/gamma-gamma)(mu_L1+mu_R1)".into(),
                    coefficient: 2.0 * (2.0 / gamma - gamma) * (l1 + r1),
                    field: Field::Primary {
                        weight: shift(1, 1),
                    },
                },
                Chi::Gamma => EomTerm {
                    formula: "2 gamma c_gamma(mu) [gamma<1]".into(),
                    coefficient: if gamma < 1.0 {
                        2.0 * gamma * eom_constant(EomConstant::CGamma, gamma, l1, r1, mu.mu_b1)?
                    } else {
                        0.0
                    },
                    field: Field::Primary {
                        weight: shift(1, 2),
                    },
                },
            };
            (EomStatus::Covered, vec![first, second])
        }
        (3, WeightTag::FullyDegenerate { chi }) => {
            d2 = Some(d2_table(*chi));
            if l2 != r2 {
                let reason = "level three is only derived for mu_L2 = mu_R2; see the stored second-order table".into();
                (EomStatus::NotCovered { reason }, Vec::new())
            } else {
                let (t, b) = level_three_instance(*chi);
                let d1 = solve_d1(&t, &b)?;
                let term = match chi {
                    Chi::TwoOverGamma => EomTerm {
                        formula: "gamma^2 (gamma-2/gamma)(mu_L1+mu_R1)".into(),
                        coefficient: gamma * gamma * (gamma - 2.0 / gamma) * (l1 + r1),
                        field: Field::D1 {
                            weight: shift(1, 1),
                            operator: d1,
                        },
                    },
                    Chi::Gamma => EomTerm {
                        formula: "-(4/gamma) c_gamma(mu) [gamma<1]".into(),
                        coefficient: if gamma < 1.0 {
                            -4.0 / gamma
                                * eom_constant(EomConstant::CGamma, gamma, l1, r1, mu.mu_b1)?
                        } else {
                            0.0
                        },
                        field: Field::D1 {
                            weight: shift(1, 2),
                            operator: d1,
                        },
                    },
                };
                (EomStatus::Covered, vec![term])
            }
        }
        (1, _) => return Err(wrong("semi-degenerate")),
        (2 | 3, _) => return Err(wrong("fully degenerate")),
        (l, _) => return Err(SingularError::Level(l)),
    };
    let null = matches!(status, EomStatus::Covered) && terms.iter().all(|t| t.coefficient == 0.0);
    Ok(EomRhs {
        level,
        weight: weight.clone(),
        status,
        terms,
        null,
        d2_table: d2,
    })
}
