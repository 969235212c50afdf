//! Log-log slope of the correlator as two insertions merge.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use w3_algebra::Q;
use w3_freefield::CorrelatorConfig;

use crate::correlator::{seiberg_violation, EstimateOptions, Shifted};
use crate::error::GmcError;
use crate::sampler::GffSampler;
use crate::stats::Stats;
use crate::weights::{add, background, inner, to_v2, E1, E2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Bulk,
    Boundary,
}

/// Insertion `moving` is placed at distance d from insertion `fixed`: to the
/// right in the bulk, on the side that keeps the boundary order on ℝ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionPair {
    pub kind: PairKind,
    pub moving: usize,
    pub fixed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionReport {
    pub pair: FusionPair,
    pub distances: Vec<f64>,
    pub estimates: Vec<Stats>,
    pub slope: f64,
    /// exponent of the upper bound, with η → 0
    pub bound_exponent: f64,
    pub correction_active: bool,
    /// slope ≥ bound exponent − 0.1
    pub bound_holds: bool,
}

pub const SLOPE_TOLERANCE: f64 = 0.1;

fn exact(x: f64) -> Result<Q, GmcError> {
    Q::from_float(x).ok_or_else(|| GmcError::Ladder(format!("distance {x} is not finite")))
}

fn pair_weights(
    cfg: &CorrelatorConfig,
    pair: &FusionPair,
) -> Result<([f64; 2], [f64; 2]), GmcError> {
    let ws: Vec<_> = match pair.kind {
        PairKind::Bulk => cfg.bulk_weights(),
        PairKind::Boundary => cfg.boundary_weights(),
    };
    let get = |k: usize| {
        ws.get(k)
            .map(to_v2)
            .ok_or_else(|| GmcError::Options(format!("no insertion {k} of this kind")))
    };
    if pair.moving == pair.fixed {
        return Err(GmcError::Options(
            "the pair needs two distinct insertions".into(),
        ));
    }
    Ok((get(pair.moving)?, get(pair.fixed)?))
}

/// −⟨α₁,α₂⟩ (bulk) or −⟨β₁,β₂⟩/2 (boundary), plus t²/2 resp. t²/4 when
/// t = ⟨α₁+α₂−Q, e₂⟩ > 0.
pub fn bound_exponent(kind: PairKind, a1: [f64; 2], a2: [f64; 2], gamma: f64) -> (f64, bool) {
    let q = background(gamma);
    let t = inner(add(add(a1, a2), [-q[0], -q[1]]), E2);
    let active = t > 0.0;
    let (base, c) = match kind {
        PairKind::Bulk => (-inner(a1, a2), 0.5),
        PairKind::Boundary => (-inner(a1, a2) / 2.0, 0.25),
    };
    (base + if active { c * t * t } else { 0.0 }, active)
}

fn moved(cfg: &CorrelatorConfig, pair: &FusionPair, d: f64) -> Result<CorrelatorConfig, GmcError> {
    let mut out = cfg.clone();
    let dq = exact(d)?;
    match pair.kind {
        PairKind::Bulk => {
            let z = cfg.bulk[pair.fixed].z.clone();
            out.bulk[pair.moving].z = Complex::new(z.re + dq, z.im);
        }
        PairKind::Boundary => {
            let s = cfg.boundary[pair.fixed].s.clone();
            out.boundary[pair.moving].s = if pair.moving > pair.fixed {
                s + dq
            } else {
                s - dq
            };
        }
    }
    out.validate()?;
    Ok(out)
}

/// Least-squares slope of ln(estimate) against ln(d). All rungs share the
/// same field samples.
pub fn fusion_probe(
    cfg: &CorrelatorConfig,
    pair: FusionPair,
    ladder: &[f64],
    opts: &EstimateOptions,
) -> Result<FusionReport, GmcError> {
    if opts.replicas == 0 {
        return Err(GmcError::NoData);
    }
    if ladder.len() < 2 || ladder.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(GmcError::Ladder(
            "need at least two positive distances".into(),
        ));
    }
    let reach = 2.0 * opts.rho * opts.mollifier.support();
    if let Some(d) = ladder.iter().find(|d| **d < reach) {
        return Err(GmcError::Ladder(format!(
            "distance {d} is below the mollification scale {reach}"
        )));
    }
    let gamma = w3_algebra::q_to_f64(&cfg.gamma);
    let (a1, a2) = pair_weights(cfg, &pair)?;
    let q = background(gamma);
    let hyp = inner(add(add(a1, a2), [-q[0], -q[1]]), E1);
    if hyp >= 0.0 {
        return Err(GmcError::Options(format!(
            "pair violates <a1 + a2 - Q, e1> < 0 ({hyp:.6})"
        )));
    }
    if cfg.is_free() {
        return Err(GmcError::Options(
            "fusion probes need nonzero cosmological constants".into(),
        ));
    }
    let configs = ladder
        .iter()
        .map(|d| moved(cfg, &pair, *d))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(v) = configs.iter().find_map(seiberg_violation) {
        return Err(GmcError::Seiberg(v));
    }
    let bulk = cfg.mu_bulk.iter().any(|m| *m != 0.0);
    let boundary = cfg.mu_boundary.iter().flatten().any(|m| *m != 0.0);
    let nodes = opts.window.nodes(bulk, boundary)?;
    let sampler = GffSampler::new(
        nodes.iter().map(|n| n.x).collect(),
        opts.mollifier,
        opts.rho,
    )?;
    let setups = configs
        .iter()
        .map(|c| Shifted::new(c, &nodes, &sampler, &opts.window))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = sampler.map_replicas(opts.seed, opts.replicas, |x| {
        setups
            .iter()
            .map(|s| s.log_value(x, &nodes).map(|(v, _)| v.exp()))
            .collect::<Result<Vec<f64>, GmcError>>()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let estimates = (0..ladder.len())
        .map(|k| Stats::from_values(&rows.iter().map(|r| r[k]).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = ladder.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = estimates.iter().map(|s| s.mean.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(GmcError::Ladder("distances must not all coincide".into()));
    }
    let slope = sxy / sxx;
    let (bound_exponent, correction_active) = bound_exponent(pair.kind, a1, a2, gamma);
    Ok(FusionReport {
        pair,
        distances: ladder.to_vec(),
        estimates,
        slope,
        bound_exponent,
        correction_active,
        bound_holds: slope >= bound_exponent - SLOPE_TOLERANCE,
    })
}
