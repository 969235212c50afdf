//! Statistical checks of the sampler and of the chaos renormalization.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::GmcError;
use crate::grid::Window;
use crate::kernel::green;
use crate::mollifier::Mollifier;
use crate::sampler::GffSampler;
use crate::stats::Stats;
use crate::weights::{inner, E1, E2, OMEGA1, OMEGA2, V2};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbePair {
    pub label: &'static str,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub u: V2,
    pub v: V2,
}

const RHO_W: V2 = [1.0, 1.0];
const H1: V2 = [2.0 / 3.0, 1.0 / 3.0];
const H2: V2 = [-1.0 / 3.0, 1.0 / 3.0];

/// Ten pairs mixing bulk and boundary points inside and outside the unit
/// disk; the first is the ln(4/3) benchmark.
pub fn default_probe_pairs() -> Vec<ProbePair> {
    let p = |label, x, y, u, v| ProbePair { label, x, y, u, v };
    vec![
        p("e1,e1 at i,2i", [0.0, 1.0], [0.0, 2.0], E1, E1),
        p("e1,omega2 at i,2i", [0.0, 1.0], [0.0, 2.0], E1, OMEGA2),
        p("e2,e2 bulk", [0.5, 0.5], [-1.0, 2.0], E2, E2),
        p("e1,e2 bulk", [0.0, 1.0], [3.0, 1.0], E1, E2),
        p(
            "omega1,omega1 boundary-bulk",
            [0.5, 0.0],
            [0.5, 0.25],
            OMEGA1,
            OMEGA1,
        ),
        p("rho,rho outside disk", [2.0, 2.0], [3.0, 1.0], RHO_W, RHO_W),
        p("e1,e1 boundary", [-0.25, 0.0], [0.25, 0.0], E1, E1),
        p("h1,h2 bulk", [0.0, 1.0], [1.0, 1.0], H1, H2),
        p("e2,e2 imaginary axis", [0.0, 3.0], [0.0, 5.0], E2, E2),
        p(
            "e1,omega1 boundary far",
            [-2.0, 0.0],
            [1.5, 0.0],
            E1,
            OMEGA1,
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairResult {
    pub pair: ProbePair,
    pub exact: f64,
    pub empirical: Stats,
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub pairs: Vec<PairResult>,
    pub max_z_score: f64,
    pub pass: bool,
}

fn c(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Empirical ⟨u,X(x)⟩⟨v,X(y)⟩ against ⟨u,v⟩G(x,y).
pub fn covariance_check(
    pairs: &[ProbePair],
    mollifier: Mollifier,
    rho: f64,
    replicas: usize,
    seed: u64,
) -> Result<CovarianceReport, GmcError> {
    let mut points: Vec<Complex64> = Vec::new();
    let mut index = |z: Complex64| match points.iter().position(|p| *p == z) {
        Some(i) => i,
        None => {
            points.push(z);
            points.len() - 1
        }
    };
    let idx: Vec<(usize, usize)> = pairs
        .iter()
        .map(|p| (index(c(p.x)), index(c(p.y))))
        .collect();
    let sampler = GffSampler::new(points, mollifier, rho)?;
    let products = sampler.map_replicas(seed, replicas, |s| {
        pairs
            .iter()
            .zip(&idx)
            .map(|(p, (i, j))| s.pairing(*i, p.u) * s.pairing(*j, p.v))
            .collect::<Vec<f64>>()
    });
    let mut out = Vec::new();
    for (k, p) in pairs.iter().enumerate() {
        let col: Vec<f64> = products.iter().map(|r| r[k]).collect();
        let empirical = Stats::from_values(&col)?;
        let exact = inner(p.u, p.v) * green(c(p.x), c(p.y));
        let z_score = (empirical.mean - exact).abs() / empirical.stderr;
        out.push(PairResult {
            pair: *p,
            exact,
            empirical,
            z_score,
        });
    }
    let max_z_score = out.iter().map(|r| r.z_score).fold(0.0, f64::max);
    Ok(CovarianceReport {
        pairs: out,
        max_z_score,
        pass: max_z_score < 3.0,
    })
}

/// ρ^{γ²}-normalized bulk mass of e^{γ⟨e₁,X⟩} over the window.
pub fn bulk_mass(
    window: &Window,
    gamma: f64,
    mollifier: Mollifier,
    rho: f64,
    replicas: usize,
    seed: u64,
) -> Result<Stats, GmcError> {
    let nodes = window.nodes(true, false)?;
    let sampler = GffSampler::new(nodes.iter().map(|n| n.x).collect(), mollifier, rho)?;
    let l0 = sampler.kernel().self_energy();
    let values = sampler.map_replicas(seed, replicas, |s| {
        nodes
            .iter()
            .enumerate()
            .map(|(j, n)| n.weight * (gamma * s.pairing(j, E1) - gamma * gamma * l0).exp())
            .sum::<f64>()
    });
    Stats::from_values(&values)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassComparison {
    pub label: String,
    pub first: Stats,
    pub second: Stats,
    pub z_score: f64,
    pub pass: bool,
}

fn compare(label: String, first: Stats, second: Stats) -> MassComparison {
    let z_score = first.z_score(&second);
    MassComparison {
        label,
        first,
        second,
        z_score,
        pass: z_score < 3.0,
    }
}

/// Normalized mass at ρ and 2ρ.
pub fn mass_stability(
    window: &Window,
    gamma: f64,
    mollifier: Mollifier,
    rho: f64,
    replicas: usize,
    seed: u64,
) -> Result<MassComparison, GmcError> {
    let a = bulk_mass(window, gamma, mollifier, rho, replicas, seed)?;
    let b = bulk_mass(
        window,
        gamma,
        mollifier,
        2.0 * rho,
        replicas,
        seed.wrapping_add(1),
    )?;
    Ok(compare(format!("rho = {rho} vs {}", 2.0 * rho), a, b))
}

/// Normalized mass under the bump and the Gaussian mollifier.
pub fn mollifier_swap(
    window: &Window,
    gamma: f64,
    rho: f64,
    replicas: usize,
    seed: u64,
) -> Result<MassComparison, GmcError> {
    let a = bulk_mass(window, gamma, Mollifier::Bump, rho, replicas, seed)?;
    let b = bulk_mass(
        window,
        gamma,
        Mollifier::Gaussian,
        rho,
        replicas,
        seed.wrapping_add(1),
    )?;
    Ok(compare("bump vs gaussian".into(), a, b))
}
