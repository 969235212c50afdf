//! Radial mollifiers and the tables derived from them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mollifier {
    /// exp(−1/(1−r²)) on the unit disk
    Bump,
    /// exp(−r²/(2σ²)) with σ = 1/5, cut at r = 3/2
    Gaussian,
}

impl FromStr for Mollifier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bump" => Ok(Mollifier::Bump),
            "gaussian" => Ok(Mollifier::Gaussian),
            _ => Err(format!(
                "unknown mollifier {s:?} (expected bump or gaussian)"
            )),
        }
    }
}

impl fmt::Display for Mollifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mollifier::Bump => "bump",
            Mollifier::Gaussian => "gaussian",
        })
    }
}

const GAUSS_SIGMA: f64 = 0.2;
const TABLE_N: usize = 800;

/// Normalized profile plus the log-potential of η∗η.
pub struct Profile {
    pub support: f64,
    norm: f64,
    kind: Mollifier,
    /// ℓ(u) on u = 2R·j/TABLE_N
    ell: Vec<f64>,
    /// polar nodes (r, weight·η(r)) for smoothing against η
    radial: Vec<(f64, f64)>,
    angles: Vec<Complex64>,
}

impl Mollifier {
    pub fn support(self) -> f64 {
        match self {
            Mollifier::Bump => 1.0,
            Mollifier::Gaussian => 1.5,
        }
    }

    fn shape(self, r: f64) -> f64 {
        match self {
            Mollifier::Bump if r < 1.0 => (-1.0 / (1.0 - r * r)).exp(),
            Mollifier::Bump => 0.0,
            Mollifier::Gaussian if r < 1.5 => (-r * r / (2.0 * GAUSS_SIGMA * GAUSS_SIGMA)).exp(),
            Mollifier::Gaussian => 0.0,
        }
    }

    pub fn profile(self) -> &'static Profile {
        static BUMP: OnceLock<Profile> = OnceLock::new();
        static GAUSS: OnceLock<Profile> = OnceLock::new();
        match self {
            Mollifier::Bump => BUMP.get_or_init(|| Profile::build(self)),
            Mollifier::Gaussian => GAUSS.get_or_init(|| Profile::build(self)),
        }
    }
}

impl Profile {
    fn build(kind: Mollifier) -> Profile {
        let support = kind.support();
        // ∫ 2πr η = 1
        let n = 4000;
        let h = support / n as f64;
        let mass: f64 = (0..n)
            .map(|j| (j as f64 + 0.5) * h)
            .map(|r| 2.0 * PI * r * kind.shape(r) * h)
            .sum();
        let norm = 1.0 / mass;

        let (nr, nt) = (200, 96);
        let hr = support / nr as f64;
        let radial: Vec<(f64, f64)> = (0..nr)
            .map(|j| (j as f64 + 0.5) * hr)
            .map(|r| (r, r * norm * kind.shape(r) * hr * 2.0 * PI / nt as f64))
            .collect();
        let angles: Vec<Complex64> = (0..nt)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / nt as f64))
            .collect();
        let mut p = Profile {
            support,
            norm,
            kind,
            ell: Vec::new(),
            radial,
            angles,
        };

        // ψ = η∗η, radial, supported on [0, 2R]
        let ht = 2.0 * support / TABLE_N as f64;
        let ts: Vec<f64> = (0..=TABLE_N).map(|j| j as f64 * ht).collect();
        let psi: Vec<f64> = ts
            .iter()
            .map(|&t| {
                p.smooth(
                    |a| p.eta((Complex64::new(t, 0.0) - a).norm()),
                    Complex64::new(0.0, 0.0),
                    1.0,
                )
            })
            .collect();
        let w = |j: usize| if j == 0 || j == TABLE_N { 0.5 * ht } else { ht };
        let total: f64 = (0..=TABLE_N)
            .map(|j| 2.0 * PI * ts[j] * psi[j] * w(j))
            .sum();
        p.ell = ts
            .iter()
            .map(|&u| {
                (1..=TABLE_N)
                    .map(|j| 2.0 * PI * ts[j] * psi[j] * w(j) * -(u.max(ts[j])).ln())
                    .sum::<f64>()
                    / total
            })
            .collect();
        p
    }

    pub fn kind(&self) -> Mollifier {
        self.kind
    }

    /// η at unit scale.
    pub fn eta(&self, r: f64) -> f64 {
        self.norm * self.kind.shape(r)
    }

    /// ∫ η_ρ(x − a) f(a) da with η_ρ = ρ⁻²η(·/ρ).
    pub fn smooth(&self, f: impl Fn(Complex64) -> f64, x: Complex64, rho: f64) -> f64 {
        self.radial
            .iter()
            .map(|&(r, w)| {
                w * self
                    .angles
                    .iter()
                    .map(|e| f(x + e * (rho * r)))
                    .sum::<f64>()
            })
            .sum()
    }

    /// ∫∫ η(a)η(b) ln(1/max(u, |a − b|)); equals −ln u once u ≥ 2R.
    pub fn ell(&self, u: f64) -> f64 {
        let top = 2.0 * self.support;
        if u >= top {
            return -u.ln();
        }
        let x = u / top * TABLE_N as f64;
        let j = (x.floor() as usize).min(TABLE_N - 1);
        let f = x - j as f64;
        self.ell[j] * (1.0 - f) + self.ell[j + 1] * f
    }
}
