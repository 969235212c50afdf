//! Midpoint quadrature nodes for the truncated domains.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GmcError;
use crate::weights::Vertex;

/// Bulk cells cover [−W, W] × [δ, height]; boundary cells cover [−W, W].
/// Nodes within ε of an insertion are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub half_width: f64,
    pub height: f64,
    pub spacing: f64,
    pub boundary_spacing: f64,
    pub delta: f64,
    pub epsilon: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            half_width: 2.0,
            height: 2.0,
            spacing: 0.1,
            boundary_spacing: 0.02,
            delta: 0.05,
            epsilon: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub x: Complex64,
    pub weight: f64,
    pub boundary: bool,
}

impl Window {
    pub fn validate(&self) -> Result<(), GmcError> {
        let all = [
            self.half_width,
            self.height,
            self.spacing,
            self.boundary_spacing,
            self.delta,
            self.epsilon,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) || self.height <= self.delta {
            return Err(GmcError::Options(format!(
                "window parameters must be positive with height > delta: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn nodes(&self, bulk: bool, boundary: bool) -> Result<Vec<Node>, GmcError> {
        self.validate()?;
        let w = self.half_width;
        let mut out = Vec::new();
        if bulk {
            let nx = (2.0 * w / self.spacing).round().max(1.0) as usize;
            let ny = ((self.height - self.delta) / self.spacing).round().max(1.0) as usize;
            let (hx, hy) = (2.0 * w / nx as f64, (self.height - self.delta) / ny as f64);
            for j in 0..ny {
                for i in 0..nx {
                    let x = Complex64::new(
                        -w + (i as f64 + 0.5) * hx,
                        self.delta + (j as f64 + 0.5) * hy,
                    );
                    out.push(Node {
                        x,
                        weight: hx * hy,
                        boundary: false,
                    });
                }
            }
        }
        if boundary {
            let n = (2.0 * w / self.boundary_spacing).round().max(1.0) as usize;
            let h = 2.0 * w / n as f64;
            out.extend((0..n).map(|i| Node {
                x: Complex64::new(-w + (i as f64 + 0.5) * h, 0.0),
                weight: h,
                boundary: true,
            }));
        }
        Ok(out)
    }

    pub fn excluded(&self, x: Complex64, vertices: &[Vertex]) -> bool {
        vertices.iter().any(|v| (x - v.x).norm() <= self.epsilon)
    }
}
