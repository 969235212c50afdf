use serde::Serialize;

use crate::error::GmcError;

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
}

impl Stats {
    /// Sums run in index order so the result does not depend on scheduling.
    pub fn from_values(values: &[f64]) -> Result<Stats, GmcError> {
        let n = values.len();
        if n == 0 {
            return Err(GmcError::NoData);
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            f64::INFINITY
        };
        Ok(Stats {
            mean,
            stderr,
            replicas: n,
        })
    }

    pub fn relative_stderr(&self) -> f64 {
        self.stderr / self.mean.abs()
    }

    /// |self − other| in units of the combined standard error of two
    /// independent estimates.
    pub fn z_score(&self, other: &Stats) -> f64 {
        (self.mean - other.mean).abs() / self.stderr.hypot(other.stderr)
    }
}
