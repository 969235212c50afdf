//! Exact Gaussian sampling of the mollified field on a finite point set.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::GmcError;
use crate::kernel::Kernel;
use crate::mollifier::Mollifier;
use crate::weights::V2;

/// Dense factorization budget.
pub const MAX_POINTS: usize = 4096;
const BATCH: usize = 32;

/// One replica of the field: coordinates (Y₁, Y₂) of X in the orthonormal
/// frame f₁ = e₁/√2, f₂ = (e₁ + 2e₂)/√6 at every grid point.
#[derive(Clone, Debug)]
pub struct GffSample {
    pub points: Arc<[Complex64]>,
    pub values: Vec<[f64; 2]>,
    pub seed: u64,
    pub replica: u64,
    pub rho: f64,
}

impl GffSample {
    /// ⟨u, Xρ(x_k)⟩ for u in the (e₁, e₂) basis.
    pub fn pairing(&self, k: usize, u: V2) -> f64 {
        let [y1, y2] = self.values[k];
        (2.0 * u[0] - u[1]) / SQRT_2 * y1 + 3.0 * u[1] / 6f64.sqrt() * y2
    }
}

/// Factorized covariance, immutable and shared across replicas.
pub struct GffSampler {
    points: Arc<[Complex64]>,
    kernel: Kernel,
    /// Pρ at each point
    log_plus: Vec<f64>,
    chol: DMatrix<f64>,
}

impl GffSampler {
    pub fn new(points: Vec<Complex64>, mollifier: Mollifier, rho: f64) -> Result<Self, GmcError> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(GmcError::BadRho(rho));
        }
        if points.len() > MAX_POINTS {
            return Err(GmcError::TooManyPoints(points.len()));
        }
        if points
            .iter()
            .any(|x| x.im < 0.0 || !x.re.is_finite() || !x.im.is_finite())
        {
            return Err(GmcError::Options(
                "grid points must lie in the closed upper half-plane".into(),
            ));
        }
        let kernel = Kernel::new(mollifier, rho);
        let log_plus: Vec<f64> = points.par_iter().map(|x| kernel.log_plus(*x)).collect();
        let n = points.len();
        let cov = DMatrix::from_fn(n, n, |i, j| {
            kernel.covariance_with(points[i], points[j], log_plus[i], log_plus[j])
        });
        let chol = cov
            .cholesky()
            .ok_or(GmcError::NotPositiveDefinite(rho))?
            .unpack();
        Ok(GffSampler {
            points: points.into(),
            kernel,
            log_plus,
            chol,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn log_plus(&self) -> &[f64] {
        &self.log_plus
    }

    /// Normals for replica `r` come from their own stream, so any replica can
    /// be replayed from (seed, r) alone.
    fn noise(&self, seed: u64, replica: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replica);
        (0..2 * self.points.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect()
    }

    fn batch(&self, seed: u64, replicas: std::ops::Range<u64>) -> Vec<GffSample> {
        let n = self.points.len();
        let m = replicas.end - replicas.start;
        let mut xi = DMatrix::zeros(n, 2 * m as usize);
        for (c, r) in replicas.clone().enumerate() {
            let z = self.noise(seed, r);
            for i in 0..n {
                xi[(i, 2 * c)] = z[2 * i];
                xi[(i, 2 * c + 1)] = z[2 * i + 1];
            }
        }
        let y = &self.chol * xi;
        replicas
            .enumerate()
            .map(|(c, r)| GffSample {
                points: self.points.clone(),
                values: (0..n).map(|i| [y[(i, 2 * c)], y[(i, 2 * c + 1)]]).collect(),
                seed,
                replica: r,
                rho: self.kernel.rho,
            })
            .collect()
    }

    pub fn sample(&self, seed: u64, replica: u64) -> GffSample {
        self.batch(seed, replica..replica + 1)
            .pop()
            .expect("one replica")
    }

    /// f applied to replicas 0..count, in replica order whatever the thread
    /// count.
    pub fn map_replicas<T: Send>(
        &self,
        seed: u64,
        count: usize,
        f: impl Fn(&GffSample) -> T + Sync,
    ) -> Vec<T> {
        let count = count as u64;
        let starts: Vec<u64> = (0..count).step_by(BATCH).collect();
        starts
            .par_iter()
            .map(|&s| {
                self.batch(seed, s..(s + BATCH as u64).min(count))
                    .iter()
                    .map(&f)
                    .collect::<Vec<T>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }
}
