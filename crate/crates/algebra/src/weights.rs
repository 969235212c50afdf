//! Coupling-dependent constants, conformal weight and spin.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::poly::Poly;
use crate::scalar::{q_frac, Field, Ring, Q};
use crate::{CartanVector, GammaRational};

/// Polynomials in an auxiliary weight parameter κ over ℚ(γ).
pub type KappaPoly = Poly<GammaRational>;

/// γ together with q = γ + 2/γ, in whatever scalar ring the caller works in.
#[derive(Clone, Debug, PartialEq)]
pub struct Couplings<T> {
    pub gamma: T,
    pub q: T,
}

impl Couplings<GammaRational> {
    pub fn symbolic() -> Self {
        Self::from_gamma(GammaRational::gamma())
    }
}

impl<T: Field> Couplings<T> {
    pub fn from_gamma(gamma: T) -> Self {
        let q = gamma.clone() + T::from_int(2) / gamma.clone();
        Couplings { gamma, q }
    }

    /// χ = 2/γ.
    pub fn two_over_gamma(&self) -> T {
        T::from_int(2) / self.gamma.clone()
    }
}

impl<T: Ring> Couplings<T> {
    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Couplings<U> {
        Couplings {
            gamma: f(&self.gamma),
            q: f(&self.q),
        }
    }

    /// Background charge Q = qρ.
    pub fn background(&self) -> CartanVector<T> {
        CartanVector::rho().scale(&self.q)
    }

    /// Δ_α = ⟨α,Q⟩/2 − |α|²/4.
    pub fn conformal_weight(&self, alpha: &CartanVector<T>) -> T {
        alpha.inner(&self.background()).scale_q(&q_frac(1, 2))
            - alpha.norm2().scale_q(&q_frac(1, 4))
    }

    /// ∏ᵢ⟨hᵢ, α − Q⟩ without the normalization constant.
    pub fn spin_product(&self, alpha: &CartanVector<T>) -> T {
        let shifted = alpha.clone() - self.background();
        (1..=3).fold(T::one(), |acc, i| acc * CartanVector::h(i).inner(&shifted))
    }

    /// w(α) = c_w ∏ᵢ⟨hᵢ, α − Q⟩.
    pub fn spin(&self, alpha: &CartanVector<T>) -> T {
        self.spin_product(alpha).scale_q(spin_normalization())
    }
}

/// c_w, fixed so that 3w(κω₁)/(2Δ_{κω₁}) = q − 2κ/3 identically in κ.
pub fn spin_normalization() -> &'static Q {
    static CW: OnceLock<Q> = OnceLock::new();
    CW.get_or_init(|| solve_spin_normalization().unwrap_or_else(|e| panic!("{e}")))
}

pub fn solve_spin_normalization() -> Result<Q, AlgebraError> {
    let c = Couplings::symbolic().map(|x| KappaPoly::constant(x.clone()));
    let kappa = KappaPoly::var();
    let beta = CartanVector::omega1().scale(&kappa);
    let target = c.q.clone() - kappa.scale(&GammaRational::frac(2, 3));
    // 3w/(2Δ) = target  ⇔  c_w·P = (2/3)·Δ·target
    let rhs = (c.conformal_weight(&beta) * target).scale(&GammaRational::frac(2, 3));
    let (quot, rem) = rhs.div_rem(&c.spin_product(&beta));
    if !rem.is_zero() || !quot.is_constant() {
        return Err(AlgebraError::SpinNormalization(format!(
            "quotient {quot:?}, remainder {rem:?}"
        )));
    }
    quot.coeff(0).as_constant().ok_or_else(|| {
        AlgebraError::SpinNormalization(format!("depends on γ: {:?}", quot.coeff(0)))
    })
}

/// Named constants of the rank-two data at symbolic γ.
#[derive(Clone, Debug)]
pub struct Constants {
    pub e1: CartanVector,
    pub e2: CartanVector,
    pub omega1: CartanVector,
    pub omega2: CartanVector,
    pub rho: CartanVector,
    pub h1: CartanVector,
    pub h2: CartanVector,
    pub h3: CartanVector,
    pub background: CartanVector,
    pub q: GammaRational,
}

pub fn constants() -> Constants {
    let c = Couplings::symbolic();
    Constants {
        e1: CartanVector::e1(),
        e2: CartanVector::e2(),
        omega1: CartanVector::omega1(),
        omega2: CartanVector::omega2(),
        rho: CartanVector::rho(),
        h1: CartanVector::h(1),
        h2: CartanVector::h(2),
        h3: CartanVector::h(3),
        background: c.background(),
        q: c.q,
    }
}
