//! Singular combinations of W- and L-descendants on degenerate weights.

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use w3_algebra::{CartanVector, Couplings, GammaRational, KappaPoly, Ring};
use w3_forms::l_form_with;
use w3_forms::{
    l_form, miura_w_form, miura_w_form_in, FieldPolynomial, Partition, Weight, WeightTag,
};

use crate::error::SingularError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Descendant {
    W(i64),
    L(Partition),
}

impl fmt::Display for Descendant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descendant::W(n) => write!(f, "W_-{n}"),
            Descendant::L(p) => write!(f, "L_-{p}"),
        }
    }
}

impl Serialize for Descendant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Descendant {
    pub fn form(&self, alpha: &CartanVector) -> Result<FieldPolynomial, SingularError> {
        Ok(match self {
            Descendant::W(n) => miura_w_form(*n, alpha)?,
            Descendant::L(p) => l_form(*p, alpha),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularVectorSpec {
    pub level: u8,
    pub weight: Weight,
    pub coefficients: Vec<(Descendant, GammaRational)>,
}

impl SingularVectorSpec {
    pub fn coefficient(&self, d: Descendant) -> Option<&GammaRational> {
        self.coefficients
            .iter()
            .find(|(x, _)| *x == d)
            .map(|(_, c)| c)
    }
}

/// ψ₋₁ on κωᵢ, ψ₋₂ and ψ₋₃ on −χω₁.
pub fn build_singular(level: u8, weight: &Weight) -> Result<SingularVectorSpec, SingularError> {
    weight.validate()?;
    let c = Couplings::symbolic();
    let wrong = |expected| SingularError::WrongTag {
        level,
        expected,
        got: format!("{:?}", weight.tag),
    };
    let gr = GammaRational::int;
    let coefficients = match (level, &weight.tag) {
        (1, WeightTag::SemiDegenerate { .. }) => {
            let delta = c.conformal_weight(&weight.vector);
            if delta.is_zero() {
                return Err(SingularError::RatioUndefined(weight.vector.to_string()));
            }
            let ratio = c.spin(&weight.vector) * gr(3) / (delta * gr(2));
            vec![
                (Descendant::W(1), gr(1)),
                (Descendant::L(Partition::Single(1)), -ratio),
            ]
        }
        (1, _) => return Err(wrong("semi-degenerate")),
        (2, WeightTag::FullyDegenerate { chi }) => {
            let x = chi.symbolic();
            vec![
                (Descendant::W(2), gr(1)),
                (Descendant::L(Partition::OneOne), gr(4) / x.clone()),
                (
                    Descendant::L(Partition::Single(2)),
                    GammaRational::frac(4, 3) * x,
                ),
            ]
        }
        (3, WeightTag::FullyDegenerate { chi }) => {
            let x = chi.symbolic();
            vec![
                (Descendant::W(3), gr(1)),
                (
                    Descendant::L(Partition::Single(3)),
                    x.clone() * GammaRational::frac(1, 3) + gr(2) / x.clone(),
                ),
                (Descendant::L(Partition::OneTwo), -(gr(4) / x.clone())),
                (Descendant::L(Partition::OneOneOne), -(gr(8) / x.pow(3))),
            ]
        }
        (2 | 3, _) => return Err(wrong("fully degenerate")),
        (l, _) => return Err(SingularError::Level(l)),
    };
    Ok(SingularVectorSpec {
        level,
        weight: weight.clone(),
        coefficients,
    })
}

/// The assembled combination; zero for a genuine singular vector.
pub fn verify_null_form(spec: &SingularVectorSpec) -> Result<FieldPolynomial, SingularError> {
    let mut acc = FieldPolynomial::zero(spec.level as u32);
    for (d, c) in &spec.coefficients {
        acc = acc.checked_add_scaled(c, &d.form(&spec.weight.vector)?)?;
    }
    Ok(acc)
}

fn kappa_weight(index: u8) -> CartanVector<KappaPoly> {
    let base = if index == 1 {
        CartanVector::omega1()
    } else {
        CartanVector::omega2()
    };
    base.scale(&KappaPoly::var())
}

/// 2Δ·W₋₁ − 3w·L₋₁ on κωᵢ with κ an indeterminate; ψ₋₁ cleared of its denominator.
pub fn level_one_symbolic_residual(index: u8) -> Result<FieldPolynomial<KappaPoly>, SingularError> {
    let c = Couplings::symbolic().map(|x| KappaPoly::constant(x.clone()));
    let alpha = kappa_weight(index);
    let two_delta = c.conformal_weight(&alpha).scale_q(&w3_algebra::q_int(2));
    let three_w = c.spin(&alpha).scale_q(&w3_algebra::q_int(3));
    let w = miura_w_form_in(1, &alpha)?;
    let l = l_form_with(Partition::Single(1), &alpha, &c);
    Ok(w.scale(&two_delta).checked_sub(&l.scale(&three_w))?)
}

/// 3w(κω₁) − 2Δ_{κω₁}(q − 2κ/3) as a polynomial in κ over ℚ(γ); the ratio
/// identity holds iff this vanishes, since Δ_{κω₁} is not identically zero.
pub fn ratio_identity_residual() -> KappaPoly {
    let c = Couplings::symbolic().map(|x| KappaPoly::constant(x.clone()));
    let alpha = kappa_weight(1);
    let kappa = KappaPoly::var();
    let target = c.q.clone() - kappa.scale(&GammaRational::frac(2, 3));
    let three_w = c.spin(&alpha).scale_q(&w3_algebra::q_int(3));
    let two_delta = c.conformal_weight(&alpha).scale_q(&w3_algebra::q_int(2));
    three_w - two_delta * target
}
