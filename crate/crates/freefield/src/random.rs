//! Randomized neutral configurations for property checks.

use num_complex::Complex;
use rand::Rng;
use w3_algebra::{q_frac, CartanVector, Couplings, GammaRational, Q};
use w3_forms::Weight;

use crate::config::{BoundaryInsertion, BulkInsertion, CorrelatorConfig};

fn small_q<R: Rng>(rng: &mut R) -> Q {
    q_frac(rng.random_range(-6..=6), rng.random_range(1..=4))
}

/// a + bγ per coordinate, with small random rationals a, b.
fn symbolic_weight<R: Rng>(rng: &mut R) -> CartanVector {
    let mut coord = || {
        GammaRational::constant(small_q(rng))
            + GammaRational::constant(small_q(rng)) * GammaRational::gamma()
    };
    CartanVector::new(coord(), coord())
}

/// Random rational positions and γ-dependent weights with Σα + ½Σβ = Q; the
/// last insertion absorbs the neutrality constraint.
pub fn random_neutral_config<R: Rng>(
    rng: &mut R,
    n_bulk: usize,
    n_boundary: usize,
    gamma: Q,
) -> CorrelatorConfig {
    assert!(n_bulk + n_boundary > 0, "need at least one insertion");
    let q = Couplings::symbolic().background();
    let mut alphas: Vec<CartanVector> = (0..n_bulk).map(|_| symbolic_weight(rng)).collect();
    let mut betas: Vec<CartanVector> = (0..n_boundary).map(|_| symbolic_weight(rng)).collect();
    let half = GammaRational::frac(1, 2);
    let sum_a = alphas
        .iter()
        .fold(CartanVector::zero(), |acc, a| acc + a.clone());
    if n_boundary > 0 {
        let rest = betas[..n_boundary - 1]
            .iter()
            .fold(CartanVector::zero(), |acc, b| acc + b.scale(&half));
        betas[n_boundary - 1] = (q - sum_a - rest).scale(&GammaRational::int(2));
    } else {
        let rest = alphas[..n_bulk - 1]
            .iter()
            .fold(CartanVector::zero(), |acc, a| acc + a.clone());
        alphas[n_bulk - 1] = q - rest;
    }

    let mut bulk = Vec::new();
    while bulk.len() < n_bulk {
        let z = Complex::new(
            q_frac(rng.random_range(-12..=12), rng.random_range(1..=5)),
            q_frac(rng.random_range(1..=12), rng.random_range(1..=5)),
        );
        if bulk.iter().all(|b: &BulkInsertion| b.z != z) {
            let alpha = Weight::generic(alphas[bulk.len()].clone());
            bulk.push(BulkInsertion { z, alpha });
        }
    }
    let mut points: Vec<Q> = Vec::new();
    while points.len() < n_boundary {
        let s = q_frac(rng.random_range(-20..=20), rng.random_range(1..=5));
        if !points.contains(&s) {
            points.push(s);
        }
    }
    points.sort();
    let boundary = points
        .into_iter()
        .zip(betas)
        .map(|(s, b)| BoundaryInsertion {
            s,
            beta: Weight::generic(b),
        })
        .collect();
    CorrelatorConfig::new(gamma, bulk, boundary).expect("random config is valid")
}
