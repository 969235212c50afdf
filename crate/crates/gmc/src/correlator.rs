//! Regularized correlators: the direct vertex average at μ = 0, and the
//! Girsanov-shifted representation with the zero mode integrated out.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use w3_freefield::{coulomb_log_correlator, log_coulomb_value, CorrelatorConfig};

use crate::error::GmcError;
use crate::grid::{Node, Window};
use crate::kernel::{green, log_plus, Kernel};
use crate::mollifier::Mollifier;
use crate::sampler::{GffSample, GffSampler};
use crate::stats::Stats;
use crate::weights::{background, inner, norm2, root, to_v2, vertices, Vertex, E1, OMEGA1, OMEGA2};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub rho: f64,
    pub mollifier: Mollifier,
    pub window: Window,
    pub replicas: usize,
    pub seed: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            rho: 0.01,
            mollifier: Mollifier::Bump,
            window: Window::default(),
            replicas: 2000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// average of the renormalized vertex product
    DirectVertex,
    /// shifted chaos masses with the zero mode integrated exactly
    Shifted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroModeReport {
    /// ⟨s, ωᵢ⟩/γ
    pub kappa: [f64; 2],
    /// largest relative quadrature error over replicas and both directions
    pub max_relative_error: f64,
    /// integration variable w = e^{γ⟨eᵢ,c⟩/2} mapped from (0, 1) by w = L t/(1 − t)
    pub mapping: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub rho: f64,
    pub mollifier: Mollifier,
    pub grid_points: usize,
    pub excluded_points: usize,
    /// ln of the Gaussian prefactor at the mollified level
    pub log_prefactor: f64,
    pub closed_form: Option<f64>,
    /// variance of the log-integrand (direct method)
    pub log_variance: Option<f64>,
    /// √(e^{σ²} − 1)/√R for a log-normal integrand
    pub predicted_relative_stderr: Option<f64>,
    pub zero_mode: Option<ZeroModeReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelatorEstimate {
    pub method: Method,
    pub estimate: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub diagnostics: Diagnostics,
}

/// Which admissibility condition fails, if any.
pub fn seiberg_violation(cfg: &CorrelatorConfig) -> Option<String> {
    let gamma = w3_algebra::q_to_f64(&cfg.gamma);
    let s = to_v2(&cfg.total_charge());
    for (i, w) in [OMEGA1, OMEGA2].into_iter().enumerate() {
        if inner(s, w) <= 0.0 {
            return Some(format!(
                "<s, omega_{}> > 0 fails: {:.6}",
                i + 1,
                inner(s, w)
            ));
        }
    }
    let q = background(gamma);
    let entries = cfg
        .bulk_weights()
        .into_iter()
        .map(|w| ("alpha", to_v2(&w)))
        .chain(
            cfg.boundary_weights()
                .into_iter()
                .map(|w| ("beta", to_v2(&w))),
        );
    for (k, (name, w)) in entries.enumerate() {
        for i in 0..2 {
            let v = inner([w[0] - q[0], w[1] - q[1]], root(i));
            if v >= 0.0 {
                return Some(format!("<{name}_{k} - Q, e_{}> < 0 fails: {v:.6}", i + 1));
            }
        }
    }
    None
}

/// ln of E[∏ renormalized e^{⟨a_k, Φρ(x_k)⟩}] at the mollified level.
pub fn log_prefactor(vs: &[Vertex], kernel: &Kernel, gamma: f64) -> f64 {
    let q = background(gamma);
    let p: Vec<f64> = vs.iter().map(|v| kernel.log_plus(v.x)).collect();
    let l0 = kernel.self_energy();
    let mut out = 0.0;
    for (k, v) in vs.iter().enumerate() {
        for (l, w) in vs.iter().enumerate() {
            out += 0.5 * inner(v.a, w.a) * kernel.covariance_with(v.x, w.x, p[k], p[l]);
        }
        out -= 0.5 * norm2(v.a) * v.multiplicity() * l0 + 2.0 * inner(v.a, q) * p[k];
    }
    out
}

/// Same quantity without mollification: the divergent diagonal is dropped.
pub fn exact_log_prefactor(vs: &[Vertex], gamma: f64) -> f64 {
    let q = background(gamma);
    let mut out = 0.0;
    for (k, v) in vs.iter().enumerate() {
        for w in &vs[k + 1..] {
            out += inner(v.a, w.a) * green(v.x, w.x);
        }
        let mirror = if v.boundary {
            0.0
        } else {
            -(v.x - v.x.conj()).norm().ln()
        };
        out +=
            0.5 * norm2(v.a) * (mirror + 4.0 * log_plus(v.x)) - 2.0 * inner(v.a, q) * log_plus(v.x);
    }
    out
}

fn free_field_closed_form(cfg: &CorrelatorConfig) -> Option<f64> {
    coulomb_log_correlator(cfg)
        .ok()
        .map(|t| log_coulomb_value(cfg, &t).exp())
}

/// ln ∫_ℝ e^{κy − a e^y − b e^{y/2}} dy and its relative quadrature error.
pub fn log_zero_mode(kappa: f64, a: f64, b: f64) -> Result<(f64, f64), GmcError> {
    if kappa <= 0.0 {
        return Err(GmcError::ZeroMode(format!(
            "kappa = {kappa} must be positive (<s, omega_i> > 0)"
        )));
    }
    if !(a >= 0.0) || (a == 0.0 && !(b > 0.0)) {
        return Err(GmcError::ZeroMode(format!(
            "no confining mass (bulk {a}, boundary {b})"
        )));
    }
    if b == 0.0 {
        return Ok((ln_gamma(kappa) - kappa * a.ln(), 0.0));
    }
    // 2∫₀^∞ w^{2κ−1} e^{−a w² − b w} dw, centred on the largest stationary point
    let p = 2.0 * kappa - 1.0;
    let disc = b * b + 8.0 * a * p;
    let scale = if a > 0.0 { a.sqrt().recip() } else { b.recip() };
    let l = if a > 0.0 && disc >= 0.0 && (-b + disc.sqrt()) > 0.0 {
        (-b + disc.sqrt()) / (4.0 * a)
    } else if a == 0.0 && p > 0.0 {
        p / b
    } else {
        scale
    };
    let f = |w: f64| p * w.ln() - a * w * w - b * w;
    let peak = f(l);
    let g = |t: f64| {
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        let w = l * t / (1.0 - t);
        let v = (f(w) - peak).exp() * l / ((1.0 - t) * (1.0 - t));
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let out = quadrature::double_exponential::integrate(g, 0.0, 1.0, 1e-13);
    if !(out.integral > 0.0) {
        return Err(GmcError::ZeroMode(format!(
            "quadrature returned {}",
            out.integral
        )));
    }
    Ok((
        LN_2 + peak + out.integral.ln(),
        out.error_estimate / out.integral,
    ))
}

/// Per-configuration data of the shifted representation on a fixed node set.
pub(crate) struct Shifted {
    log_prefactor: f64,
    /// ln(1/(γ²√3))
    log_jacobian: f64,
    kappa: [f64; 2],
    mu_bulk: [f64; 2],
    /// (node, ln weight, μ factor) for each direction
    terms: [Vec<(usize, f64, f64)>; 2],
    gamma: f64,
    pub excluded: usize,
}

fn arc_of(cfg_points: &[f64], x: f64) -> usize {
    let passed = cfg_points.iter().filter(|s| **s < x).count();
    if passed == 0 {
        cfg_points.len().max(1) - 1
    } else {
        passed - 1
    }
}

impl Shifted {
    pub(crate) fn new(
        cfg: &CorrelatorConfig,
        nodes: &[Node],
        sampler: &GffSampler,
        window: &Window,
    ) -> Result<Shifted, GmcError> {
        let gamma = w3_algebra::q_to_f64(&cfg.gamma);
        let kernel = sampler.kernel();
        let vs = vertices(cfg);
        let s = to_v2(&cfg.total_charge());
        let kappa = [inner(s, OMEGA1) / gamma, inner(s, OMEGA2) / gamma];
        let q = background(gamma);
        let l0 = kernel.self_energy();
        let bpoints: Vec<f64> = vs.iter().filter(|v| v.boundary).map(|v| v.x.re).collect();
        let vp: Vec<f64> = vs.iter().map(|v| kernel.log_plus(v.x)).collect();
        let mut terms = [Vec::new(), Vec::new()];
        let mut excluded = 0;
        for (j, node) in nodes.iter().enumerate() {
            if window.excluded(node.x, &vs) {
                excluded += 1;
                continue;
            }
            let pj = sampler.log_plus()[j];
            // coefficient of ⟨eᵢ, X⟩ in the density: γ in the bulk, γ/2 on ℝ
            let c = if node.boundary { gamma / 2.0 } else { gamma };
            let renorm = 0.5 * c * c * 2.0 * if node.boundary { 2.0 } else { 1.0 } * l0;
            for (i, t) in terms.iter_mut().enumerate() {
                let e = root(i);
                let shift: f64 = vs
                    .iter()
                    .zip(&vp)
                    .map(|(v, pv)| inner(e, v.a) * kernel.covariance_with(node.x, v.x, pj, *pv))
                    .sum();
                let lw = node.weight.ln() + c * shift - 2.0 * c * inner(e, q) * pj - renorm;
                let mu = if node.boundary {
                    cfg.mu_boundary[arc_of(&bpoints, node.x.re)][i]
                } else {
                    1.0
                };
                if mu != 0.0 {
                    t.push((j, lw, mu));
                }
            }
        }
        Ok(Shifted {
            log_prefactor: log_prefactor(&vs, kernel, gamma),
            log_jacobian: -(gamma * gamma * 3f64.sqrt()).ln(),
            kappa,
            mu_bulk: cfg.mu_bulk,
            terms,
            gamma,
            excluded,
        })
    }

    /// Chaos masses (bulk, boundary) in direction i for one replica.
    fn masses(&self, i: usize, sample: &GffSample, nodes: &[Node]) -> (f64, f64) {
        let e = root(i);
        let (mut m, mut b) = (0.0, 0.0);
        for &(j, lw, mu) in &self.terms[i] {
            if nodes[j].boundary {
                b += mu * (lw + self.gamma / 2.0 * sample.pairing(j, e)).exp();
            } else {
                m += (lw + self.gamma * sample.pairing(j, e)).exp();
            }
        }
        (m, b)
    }

    /// ln of the integrand for one replica, with the worst quadrature error.
    pub(crate) fn log_value(
        &self,
        sample: &GffSample,
        nodes: &[Node],
    ) -> Result<(f64, f64), GmcError> {
        let mut out = self.log_prefactor + self.log_jacobian;
        let mut err: f64 = 0.0;
        for i in 0..2 {
            let (m, b) = self.masses(i, sample, nodes);
            let (lj, e) = log_zero_mode(self.kappa[i], self.mu_bulk[i] * m, b)?;
            out += lj;
            err = err.max(e);
        }
        Ok((out, err))
    }
}

fn nodes_for(cfg: &CorrelatorConfig, window: &Window) -> Result<Vec<Node>, GmcError> {
    let bulk = cfg.mu_bulk.iter().any(|m| *m != 0.0);
    let boundary = cfg.mu_boundary.iter().flatten().any(|m| *m != 0.0);
    window.nodes(bulk, boundary)
}

/// Direct average of the renormalized vertex product; needs μ = 0 and
/// neutral weights.
pub fn direct_vertex_estimate(
    cfg: &CorrelatorConfig,
    opts: &EstimateOptions,
) -> Result<CorrelatorEstimate, GmcError> {
    if opts.replicas == 0 {
        return Err(GmcError::NoData);
    }
    if !cfg.neutral() {
        return Err(GmcError::NotNeutral(to_v2(&cfg.total_charge())));
    }
    let gamma = w3_algebra::q_to_f64(&cfg.gamma);
    let vs = vertices(cfg);
    let sampler = GffSampler::new(vs.iter().map(|v| v.x).collect(), opts.mollifier, opts.rho)?;
    let kernel = *sampler.kernel();
    let q = background(gamma);
    let l0 = kernel.self_energy();
    let offset: f64 = vs
        .iter()
        .zip(sampler.log_plus())
        .map(|(v, p)| 0.5 * norm2(v.a) * v.multiplicity() * l0 + 2.0 * inner(v.a, q) * p)
        .sum();
    let values = sampler.map_replicas(opts.seed, opts.replicas, |x| {
        (vs.iter()
            .enumerate()
            .map(|(k, v)| x.pairing(k, v.a))
            .sum::<f64>()
            - offset)
            .exp()
    });
    let stats = Stats::from_values(&values)?;
    let log_variance: f64 = vs
        .iter()
        .enumerate()
        .flat_map(|(k, v)| vs.iter().enumerate().map(move |(l, w)| (k, l, v, w)))
        .map(|(k, l, v, w)| {
            inner(v.a, w.a)
                * kernel.covariance_with(v.x, w.x, sampler.log_plus()[k], sampler.log_plus()[l])
        })
        .sum();
    Ok(CorrelatorEstimate {
        method: Method::DirectVertex,
        estimate: stats.mean,
        stderr: stats.stderr,
        replicas: stats.replicas,
        diagnostics: Diagnostics {
            rho: opts.rho,
            mollifier: opts.mollifier,
            grid_points: vs.len(),
            excluded_points: 0,
            log_prefactor: log_prefactor(&vs, &kernel, gamma),
            closed_form: free_field_closed_form(cfg),
            log_variance: Some(log_variance),
            predicted_relative_stderr: Some(
                (log_variance.exp() - 1.0).sqrt() / (opts.replicas as f64).sqrt(),
            ),
            zero_mode: None,
        },
    })
}

/// Monte Carlo estimate of the regularized correlator. With every μ = 0 the
/// vertex product is averaged directly; otherwise the weights must be
/// admissible and the shifted representation is used.
pub fn estimate_correlator(
    cfg: &CorrelatorConfig,
    opts: &EstimateOptions,
) -> Result<CorrelatorEstimate, GmcError> {
    if opts.replicas == 0 {
        return Err(GmcError::NoData);
    }
    if cfg.is_free() {
        return direct_vertex_estimate(cfg, opts);
    }
    if let Some(v) = seiberg_violation(cfg) {
        return Err(GmcError::Seiberg(v));
    }
    let nodes = nodes_for(cfg, &opts.window)?;
    let sampler = GffSampler::new(
        nodes.iter().map(|n| n.x).collect(),
        opts.mollifier,
        opts.rho,
    )?;
    let shifted = Shifted::new(cfg, &nodes, &sampler, &opts.window)?;
    let results = sampler.map_replicas(opts.seed, opts.replicas, |x| shifted.log_value(x, &nodes));
    let mut values = Vec::with_capacity(results.len());
    let mut err: f64 = 0.0;
    for r in results {
        let (v, e) = r?;
        values.push(v.exp());
        err = err.max(e);
    }
    let stats = Stats::from_values(&values)?;
    Ok(CorrelatorEstimate {
        method: Method::Shifted,
        estimate: stats.mean,
        stderr: stats.stderr,
        replicas: stats.replicas,
        diagnostics: Diagnostics {
            rho: opts.rho,
            mollifier: opts.mollifier,
            grid_points: nodes.len(),
            excluded_points: shifted.excluded,
            log_prefactor: shifted.log_prefactor,
            closed_form: None,
            log_variance: None,
            predicted_relative_stderr: None,
            zero_mode: Some(ZeroModeReport {
                kappa: shifted.kappa,
                max_relative_error: err,
                mapping: "w = L t/(1-t), t in (0,1)",
            }),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeCheck {
    pub monte_carlo: Stats,
    pub quadrature: f64,
    pub z_score: f64,
    pub pass: bool,
}

/// ∂/∂μ_{B,1} at μ = 0 of the correlator with the zero mode stripped:
/// −E[vertex product × bulk mass of e^{γ⟨e₁,Φ⟩}] over the truncated window,
/// against the same nodes applied to the exact one-point function.
pub fn mu_b1_derivative(
    cfg: &CorrelatorConfig,
    opts: &EstimateOptions,
) -> Result<DerivativeCheck, GmcError> {
    if opts.replicas == 0 {
        return Err(GmcError::NoData);
    }
    if !cfg.is_free() || !cfg.neutral() {
        return Err(GmcError::Options(
            "the derivative check runs at mu = 0 on neutral weights".into(),
        ));
    }
    let gamma = w3_algebra::q_to_f64(&cfg.gamma);
    let vs = vertices(cfg);
    let q = background(gamma);
    let nodes = opts.window.nodes(true, false)?;
    let sampler = GffSampler::new(
        nodes.iter().map(|n| n.x).collect(),
        opts.mollifier,
        opts.rho,
    )?;
    let mut probe = cfg.clone();
    probe.mu_bulk = [1.0, 0.0];
    let shifted = Shifted::new(&probe, &nodes, &sampler, &opts.window)?;
    let values = sampler.map_replicas(opts.seed, opts.replicas, |x| {
        -shifted.log_prefactor.exp() * shifted.masses(0, x, &nodes).0
    });
    let monte_carlo = Stats::from_values(&values)?;

    let c = exact_log_prefactor(&vs, gamma).exp();
    let quadrature: f64 = -c
        * nodes
            .iter()
            .filter(|n| !opts.window.excluded(n.x, &vs))
            .map(|n| {
                let shift: f64 = vs.iter().map(|v| inner(E1, v.a) * green(n.x, v.x)).sum();
                let one_point = gamma * gamma * (-(2.0 * n.x.im).ln() + 4.0 * log_plus(n.x));
                n.weight
                    * (gamma * shift - 2.0 * gamma * inner(E1, q) * log_plus(n.x) + one_point).exp()
            })
            .sum::<f64>();
    let z_score = (monte_carlo.mean - quadrature).abs() / monte_carlo.stderr;
    Ok(DerivativeCheck {
        monte_carlo,
        quadrature,
        z_score,
        pass: z_score < 3.0,
    })
}
