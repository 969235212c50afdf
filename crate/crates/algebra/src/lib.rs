//! Exact arithmetic foundation: rational functions of the coupling γ over ℚ,
//! polynomials over any exact ring, and vectors of the 𝔰𝔩₃ Cartan subalgebra.

mod cartan;
mod error;
mod gamma;
pub mod poly;
pub mod scalar;
mod weights;

pub use cartan::CartanVector;
pub use error::AlgebraError;
pub use gamma::{FromGamma, GammaRational, MAX_DEGREE};
pub use num_complex::Complex;
pub use poly::Poly;
pub use scalar::{parse_q, q_frac, q_int, q_to_f64, Field, Ring, Q};
pub use weights::{
    constants, solve_spin_normalization, spin_normalization, Constants, Couplings, KappaPoly,
};

/// Symbolic γ.
pub fn gamma() -> GammaRational {
    GammaRational::gamma()
}

/// ⟨u, v⟩ at symbolic γ.
pub fn inner(u: &CartanVector, v: &CartanVector) -> GammaRational {
    u.inner(v)
}

/// Δ_α at symbolic γ.
pub fn conformal_weight(alpha: &CartanVector) -> GammaRational {
    Couplings::symbolic().conformal_weight(alpha)
}

/// w(α) at symbolic γ.
pub fn spin(alpha: &CartanVector) -> GammaRational {
    Couplings::symbolic().spin(alpha)
}
