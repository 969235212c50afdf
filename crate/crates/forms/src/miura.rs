//! Spin-3 current from the quantum Miura transformation, with the convention
//! search that pins its sign, ordering and ∂T shift.
//!
//! The product ∏(q∂ + 2⟨hᵢ,∂Φ⟩) is expanded as a differential operator with
//! fully normal-ordered coefficients; the zeroth-order coefficient U₀ gives the
//! current W = N·(U₀ + k·∂T). N and k are solved from the level-one constraint
//! on κω₁ with κ symbolic; the level-two and level-three constraints on −χω₁
//! are then genuine checks.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;
use w3_algebra::{CartanVector, Couplings, FromGamma, GammaRational, KappaPoly, Ring};

use crate::error::FormError;
use crate::field_poly::FieldPolynomial;
use crate::lforms::{l_form_with, Partition};
use crate::ope::ope_mode;
use crate::weight::Chi;

type Fp<T = GammaRational> = FieldPolynomial<T>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MiuraConvention {
    /// Indices of hᵢ from the leftmost factor to the rightmost.
    pub order: [usize; 3],
    pub contraction_sign: i8,
}

impl fmt::Display for MiuraConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.order;
        write!(
            f,
            "order ({a},{b},{c}), contraction {:+}",
            self.contraction_sign
        )
    }
}

pub fn search_space() -> Vec<MiuraConvention> {
    let mut out = Vec::new();
    for order in [[3, 2, 1], [1, 2, 3]] {
        for contraction_sign in [1, -1] {
            out.push(MiuraConvention {
                order,
                contraction_sign,
            });
        }
    }
    out
}

/// T = ⟨Q,∂²Φ⟩ − ⟨∂Φ,∂Φ⟩.
pub fn stress_tensor(c: &Couplings<GammaRational>) -> Fp {
    Fp::linear(&c.background(), 2)
        .checked_sub(&Fp::pairing(1, 1))
        .expect("level 2")
}

/// Coefficients of ∂ʲ, j = 0..=3, in ∏(q∂ + 2⟨hᵢ,∂Φ⟩).
pub fn miura_coefficients(order: [usize; 3], c: &Couplings<GammaRational>) -> Vec<Fp> {
    let two = GammaRational::int(2);
    let mut ops = vec![Fp::constant(GammaRational::int(1))];
    for (step, &i) in order.iter().enumerate() {
        let f = Fp::linear(&CartanVector::h(i).scale(&two), 1);
        let k = step as u32 + 1;
        let mut next: Vec<Fp> = (0..=k).map(|j| Fp::zero(k - j)).collect();
        for (j, cj) in ops.iter().enumerate() {
            let lowered = cj
                .derivative()
                .scale(&c.q)
                .checked_add(&f.mul(cj))
                .expect("same level");
            next[j] = next[j].checked_add(&lowered).expect("same level");
            next[j + 1] = next[j + 1]
                .checked_add(&cj.scale(&c.q))
                .expect("same level");
        }
        ops = next;
    }
    ops
}

#[derive(Clone, Debug)]
pub struct WRealization {
    pub convention: MiuraConvention,
    pub current: Fp,
    pub normalization: GammaRational,
    pub shift: GammaRational,
}

impl WRealization {
    /// W₋ₙ^α as a form (n = 0 gives the spin as a constant form).
    pub fn mode<T: FromGamma>(&self, n: i64, alpha: &CartanVector<T>) -> Fp<T> {
        ope_mode(
            &self.current.map_coeffs(T::from_gamma),
            n,
            alpha,
            self.convention.contraction_sign,
        )
    }

    /// W₋ₙ^α with the current's coefficients mapped by `embed` (e.g. γ specialized).
    pub fn mode_with<T: Ring>(
        &self,
        n: i64,
        alpha: &CartanVector<T>,
        embed: impl Fn(&GammaRational) -> T,
    ) -> Fp<T> {
        ope_mode(
            &self.current.map_coeffs(embed),
            n,
            alpha,
            self.convention.contraction_sign,
        )
    }

    pub fn triple_pole<T: FromGamma>(&self, alpha: &CartanVector<T>) -> T {
        self.mode(0, alpha).constant_term()
    }
}

fn kappa_couplings() -> Couplings<KappaPoly> {
    Couplings::symbolic().map(KappaPoly::from_gamma)
}

fn kappa_omega1() -> CartanVector<KappaPoly> {
    CartanVector::omega1().scale(&KappaPoly::var())
}

fn c1_target() -> Fp<KappaPoly> {
    let c = kappa_couplings();
    let ratio = c.q.clone() - KappaPoly::var().scale(&GammaRational::frac(2, 3));
    l_form_with(Partition::Single(1), &kappa_omega1(), &c).scale(&ratio)
}

/// Solve N·u + M·d = t over ℚ(γ) from a list of rows (u, d, t).
fn solve_two(
    rows: &[(GammaRational, GammaRational, GammaRational)],
) -> Option<(GammaRational, GammaRational)> {
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            let det = a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone();
            if det.is_zero() {
                continue;
            }
            let n = (a.2.clone() * b.1.clone() - a.1.clone() * b.2.clone()) / det.clone();
            let m = (a.0.clone() * b.2.clone() - a.2.clone() * b.0.clone()) / det;
            return Some((n, m));
        }
    }
    None
}

fn residual<T: Ring + fmt::Display>(name: &str, r: &Fp<T>) -> Result<(), FormError> {
    if r.is_zero() {
        Ok(())
    } else {
        Err(FormError::ConstraintViolated {
            constraint: name.to_string(),
            residual: r.to_string(),
        })
    }
}

/// W₋₁^{κω₁} − (q − 2κ/3)L₋₁^{κω₁}, κ symbolic.
pub fn c1_residual(r: &WRealization) -> Fp<KappaPoly> {
    r.mode(1, &kappa_omega1())
        .checked_sub(&c1_target())
        .expect("level 1")
}

/// W₋₂ + (4/χ)L₋₍₁,₁₎ + (4χ/3)L₋₂ on −χω₁.
pub fn c2_residual(r: &WRealization, chi: Chi) -> Fp {
    let c = Couplings::symbolic();
    let x = chi.value(&c);
    let alpha = CartanVector::omega1().scale(&-x.clone());
    let w = r.mode(2, &alpha);
    let l11 = l_form_with(Partition::OneOne, &alpha, &c);
    let l2 = l_form_with(Partition::Single(2), &alpha, &c);
    w.checked_add_scaled(&(GammaRational::int(4) / x.clone()), &l11)
        .and_then(|acc| acc.checked_add_scaled(&(GammaRational::frac(4, 3) * x), &l2))
        .expect("level 2")
}

/// W₋₃ + (χ/3 + 2/χ)L₋₃ − (4/χ)L₋₍₁,₂₎ − (8/χ³)L₋₍₁,₁,₁₎ on −χω₁.
pub fn c3_residual(r: &WRealization, chi: Chi) -> Fp {
    let c = Couplings::symbolic();
    let x = chi.value(&c);
    let alpha = CartanVector::omega1().scale(&-x.clone());
    let w = r.mode(3, &alpha);
    let l3 = l_form_with(Partition::Single(3), &alpha, &c);
    let l12 = l_form_with(Partition::OneTwo, &alpha, &c);
    let l111 = l_form_with(Partition::OneOneOne, &alpha, &c);
    let a3 = x.clone() * GammaRational::frac(1, 3) + GammaRational::int(2) / x.clone();
    let a12 = -(GammaRational::int(4) / x.clone());
    let a111 = -(GammaRational::int(8) / x.pow(3));
    w.checked_add_scaled(&a3, &l3)
        .and_then(|acc| acc.checked_add_scaled(&a12, &l12))
        .and_then(|acc| acc.checked_add_scaled(&a111, &l111))
        .expect("level 3")
}

/// Fix N and k from the level-one constraint, then check all three.
pub fn evaluate_convention(conv: MiuraConvention) -> Result<WRealization, FormError> {
    let c = Couplings::symbolic();
    let u0 = miura_coefficients(conv.order, &c).swap_remove(0);
    let dt = stress_tensor(&c).derivative();
    let beta = kappa_omega1();
    let lift = |f: &Fp| f.map_coeffs(KappaPoly::from_gamma);
    let u = ope_mode(&lift(&u0), 1, &beta, conv.contraction_sign);
    let d = ope_mode(&lift(&dt), 1, &beta, conv.contraction_sign);
    let t = c1_target();

    let mut monos: Vec<_> = u
        .terms()
        .chain(d.terms())
        .chain(t.terms())
        .map(|(m, _)| m.clone())
        .collect();
    monos.sort();
    monos.dedup();
    let mut rows = Vec::new();
    for m in &monos {
        let (cu, cd, ct) = (u.coeff(m), d.coeff(m), t.coeff(m));
        let deg = [&cu, &cd, &ct]
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0);
        for j in 0..=deg {
            rows.push((cu.coeff(j), cd.coeff(j), ct.coeff(j)));
        }
    }
    let Some((n, m)) = solve_two(&rows) else {
        return Err(FormError::ConstraintViolated {
            constraint: "C1 (normalization not determined)".into(),
            residual: u.to_string(),
        });
    };
    if n.is_zero() {
        return Err(FormError::ConstraintViolated {
            constraint: "C1 (zero normalization)".into(),
            residual: "0".into(),
        });
    }
    let current = u0.scale(&n).checked_add_scaled(&m, &dt).expect("level 3");
    let real = WRealization {
        convention: conv,
        current,
        normalization: n.clone(),
        shift: m / n,
    };
    residual("C1", &c1_residual(&real))?;
    for chi in Chi::BOTH {
        residual(&format!("C2 at chi={chi}"), &c2_residual(&real, chi))?;
        residual(&format!("C3 at chi={chi}"), &c3_residual(&real, chi))?;
    }
    Ok(real)
}

pub fn search() -> Vec<(MiuraConvention, Result<WRealization, FormError>)> {
    search_space()
        .into_iter()
        .map(|c| (c, evaluate_convention(c)))
        .collect()
}

/// The unique accepted realization, computed once.
pub fn realization() -> Result<&'static WRealization, FormError> {
    static CELL: OnceLock<Result<WRealization, FormError>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut passing: Vec<WRealization> =
            search().into_iter().filter_map(|(_, r)| r.ok()).collect();
        match passing.len() {
            1 => Ok(passing.remove(0)),
            k => Err(FormError::ConventionNotUnique(k)),
        }
    })
    .as_ref()
    .map_err(Clone::clone)
}

/// W₋ₙ^α for n ∈ {1, 2, 3}.
pub fn miura_w_form(n: i64, alpha: &CartanVector) -> Result<Fp, FormError> {
    if !(1..=3).contains(&n) {
        return Err(FormError::UnsupportedMode(n));
    }
    Ok(realization()?.mode(n, alpha))
}

/// Same as [`miura_w_form`] for any ring containing ℚ(γ).
pub fn miura_w_form_in<T: FromGamma>(n: i64, alpha: &CartanVector<T>) -> Result<Fp<T>, FormError> {
    if !(1..=3).contains(&n) {
        return Err(FormError::UnsupportedMode(n));
    }
    Ok(realization()?.mode(n, alpha))
}
