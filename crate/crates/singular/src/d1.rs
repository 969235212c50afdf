//! Level-one operators D₋₁ = a·L₋₁ + b·W₋₁ fixed by their action on a weight.

use num_traits::Zero;
use serde::Serialize;
use w3_algebra::{CartanVector, GammaRational};
use w3_forms::{miura_w_form, Chi, FieldMonomial};

use crate::error::SingularError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct D1Solution {
    pub base: CartanVector,
    pub target: CartanVector,
    pub a: GammaRational,
    pub b: GammaRational,
}

/// The vector w with W₋₁^α = ⟨w, ∂Φ⟩.
pub fn w1_vector(alpha: &CartanVector) -> Result<CartanVector, SingularError> {
    let w = miura_w_form(1, alpha)?;
    let c = |i| w.coeff(&FieldMonomial::new(vec![(1, i)]));
    Ok(CartanVector::new(c(1), c(2)))
}

/// Solve a·L₋₁^{base} + b·W₋₁^{base} = ⟨target, ·⟩.
pub fn solve_d1(target: &CartanVector, base: &CartanVector) -> Result<D1Solution, SingularError> {
    let w = w1_vector(base)?;
    let det = base.c1.clone() * w.c2.clone() - base.c2.clone() * w.c1.clone();
    if det.is_zero() {
        // columns proportional: is the target on their common line?
        let line = if base.is_zero() { &w } else { base };
        let cross = line.c1.clone() * target.c2.clone() - line.c2.clone() * target.c1.clone();
        let relation = if cross.is_zero() && !line.is_zero() {
            "inside (so not unique)"
        } else {
            "outside"
        };
        return Err(SingularError::Degenerate {
            base: base.to_string(),
            target: target.to_string(),
            relation,
        });
    }
    let a = (target.c1.clone() * w.c2.clone() - target.c2.clone() * w.c1.clone()) / det.clone();
    let b = (base.c1.clone() * target.c2.clone() - base.c2.clone() * target.c1.clone()) / det;
    Ok(D1Solution {
        base: base.clone(),
        target: target.clone(),
        a,
        b,
    })
}

impl D1Solution {
    /// a·base + b·w − target, zero for an exact solve.
    pub fn reconstruction_residual(&self) -> Result<CartanVector, SingularError> {
        let w = w1_vector(&self.base)?;
        Ok(self.base.scale(&self.a) + w.scale(&self.b) - self.target.clone())
    }
}

fn beta(chi: Chi) -> CartanVector {
    CartanVector::omega1().scale(&-chi.symbolic())
}

/// Level two: base β+γe₂, target 3β+γe₂ with β = −χω₁.
pub fn level_two_instance(chi: Chi) -> (CartanVector, CartanVector) {
    let g = GammaRational::gamma();
    let b = beta(chi);
    let ge2 = CartanVector::e2().scale(&g);
    (b.scale(&GammaRational::int(3)) + ge2.clone(), b + ge2)
}

/// Level three: base −χω₁+γe₁, target γe₁ − (2/γ)ρ (χ = 2/γ) or γe₁ − γe₂ (χ = γ).
pub fn level_three_instance(chi: Chi) -> (CartanVector, CartanVector) {
    let g = GammaRational::gamma();
    let ge1 = CartanVector::e1().scale(&g);
    let target = match chi {
        Chi::TwoOverGamma => ge1.clone() - CartanVector::rho().scale(&(GammaRational::int(2) / g)),
        Chi::Gamma => ge1.clone() - CartanVector::e2().scale(&g),
    };
    (target, beta(chi) + ge1)
}

/// The four (target, base) pairs used by the equations of motion.
pub fn reference_instances() -> Vec<(String, CartanVector, CartanVector)> {
    let mut out = Vec::new();
    for chi in Chi::BOTH {
        let (t, b) = level_two_instance(chi);
        out.push((format!("level 2, chi={chi}"), t, b));
    }
    for chi in Chi::BOTH {
        let (t, b) = level_three_instance(chi);
        out.push((format!("level 3, chi={chi}"), t, b));
    }
    out
}
