//! Half-plane Green function and its mollified version.
//!
//! The field is extended evenly across ℝ, so smoothing G(x, y) = G_Ĉ(x, y) +
//! G_Ĉ(x, ȳ) at scale ρ gives Lρ(|x−y|) + Lρ(|x−ȳ|) + 2Pρ(x) + 2Pρ(y), with
//! Lρ(d) = ln(1/ρ) + ℓ(d/ρ) and Pρ = ln|·|₊ smoothed.

use num_complex::Complex64;

use crate::mollifier::{Mollifier, Profile};

pub fn log_plus(x: Complex64) -> f64 {
    x.norm().ln().max(0.0)
}

/// ln(1/|x−y|) + ln|x|₊ + ln|y|₊
pub fn green_sphere(x: Complex64, y: Complex64) -> f64 {
    -(x - y).norm().ln() + log_plus(x) + log_plus(y)
}

/// Unmollified covariance kernel on the closed upper half-plane.
pub fn green(x: Complex64, y: Complex64) -> f64 {
    green_sphere(x, y) + green_sphere(x, y.conj())
}

#[derive(Clone, Copy)]
pub struct Kernel {
    pub rho: f64,
    profile: &'static Profile,
}

impl Kernel {
    pub fn new(mollifier: Mollifier, rho: f64) -> Kernel {
        Kernel {
            rho,
            profile: mollifier.profile(),
        }
    }

    pub fn mollifier(&self) -> Mollifier {
        self.profile.kind()
    }

    /// Radius of the mollifier's support at this scale.
    pub fn reach(&self) -> f64 {
        self.rho * self.profile.support
    }

    /// Smoothed ln(1/|x−y|) at distance d.
    pub fn log_kernel(&self, d: f64) -> f64 {
        -self.rho.ln() + self.profile.ell(d / self.rho)
    }

    /// Lρ(0): the divergent part removed from each vertex.
    pub fn self_energy(&self) -> f64 {
        self.log_kernel(0.0)
    }

    /// Smoothed ln|x|₊; exact whenever the ball misses the unit circle.
    pub fn log_plus(&self, x: Complex64) -> f64 {
        if (x.norm() - 1.0).abs() >= self.reach() {
            return log_plus(x);
        }
        self.profile.smooth(log_plus, x, self.rho)
    }

    /// Mollified covariance with the Pρ values supplied.
    pub fn covariance_with(&self, x: Complex64, y: Complex64, px: f64, py: f64) -> f64 {
        self.log_kernel((x - y).norm()) + self.log_kernel((x - y.conj()).norm()) + 2.0 * (px + py)
    }

    pub fn covariance(&self, x: Complex64, y: Complex64) -> f64 {
        self.covariance_with(x, y, self.log_plus(x), self.log_plus(y))
    }
}
