//! Floating-point Cartan data and insertion lists.

use num_complex::Complex64;
use w3_algebra::{q_to_f64, CartanVector, Q};
use w3_freefield::CorrelatorConfig;

/// Coefficients in the (e₁, e₂) basis.
pub type V2 = [f64; 2];

pub const E1: V2 = [1.0, 0.0];
pub const E2: V2 = [0.0, 1.0];
pub const OMEGA1: V2 = [2.0 / 3.0, 1.0 / 3.0];
pub const OMEGA2: V2 = [1.0 / 3.0, 2.0 / 3.0];

pub fn inner(u: V2, v: V2) -> f64 {
    2.0 * u[0] * v[0] - u[0] * v[1] - u[1] * v[0] + 2.0 * u[1] * v[1]
}

pub fn add(u: V2, v: V2) -> V2 {
    [u[0] + v[0], u[1] + v[1]]
}

pub fn scale(s: f64, u: V2) -> V2 {
    [s * u[0], s * u[1]]
}

pub fn norm2(u: V2) -> f64 {
    inner(u, u)
}

/// Q = (γ + 2/γ)(e₁ + e₂)
pub fn background(gamma: f64) -> V2 {
    let q = gamma + 2.0 / gamma;
    [q, q]
}

pub fn root(i: usize) -> V2 {
    if i == 0 {
        E1
    } else {
        E2
    }
}

pub fn to_v2(v: &CartanVector<Q>) -> V2 {
    [q_to_f64(&v.c1), q_to_f64(&v.c2)]
}

/// A vertex e^{⟨a, X(x)⟩}: a = α in the bulk, a = β/2 on the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub x: Complex64,
    pub a: V2,
    pub boundary: bool,
}

impl Vertex {
    /// Multiplicity of the divergent self-energy: 1 in the bulk, 2 on ℝ.
    pub fn multiplicity(&self) -> f64 {
        if self.boundary {
            2.0
        } else {
            1.0
        }
    }
}

pub fn vertices(cfg: &CorrelatorConfig) -> Vec<Vertex> {
    let bulk = cfg
        .bulk
        .iter()
        .zip(cfg.bulk_weights())
        .map(|(b, w)| Vertex {
            x: Complex64::new(q_to_f64(&b.z.re), q_to_f64(&b.z.im)),
            a: to_v2(&w),
            boundary: false,
        });
    let boundary = cfg
        .boundary
        .iter()
        .zip(cfg.boundary_weights())
        .map(|(b, w)| Vertex {
            x: Complex64::new(q_to_f64(&b.s), 0.0),
            a: scale(0.5, to_v2(&w)),
            boundary: true,
        });
    bulk.chain(boundary).collect()
}
