use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use w3_algebra::q_frac;
use w3_freefield::{
    coulomb_log_correlator, log_coulomb_value, random_neutral_config, CorrelatorConfig,
};
use w3_gmc::weights::{vertices, E1};
use w3_gmc::*;

/// Neutral at γ = 3/5: α = β₁ = β₂ = Q/2 with Q = (59/15)(e₁ + e₂).
const BENCH: &str = r#"{"gamma":"3/5","bulk":[{"z":["0","1/2"],"alpha":["59/30","59/30"]}],
 "boundary":[{"s":"-1/2","beta":["59/30","59/30"]},{"s":"1/2","beta":["59/30","59/30"]}]}"#;

fn q(c: f64) -> f64 {
    c * 59.0 / 15.0
}

fn bench() -> CorrelatorConfig {
    CorrelatorConfig::from_json(BENCH).unwrap()
}

/// Bulk Q/2 at i with two boundary 0.6Q insertions and bulk cosmological constants.
fn massive(mu: [f64; 2]) -> CorrelatorConfig {
    let text = format!(
        r#"{{"gamma":0.6,"bulk":[{{"z":[0,1],"alpha":[{a},{a}]}}],
          "boundary":[{{"s":-1,"beta":[{b},{b}]}},{{"s":1,"beta":[{b},{b}]}}], "mu_bulk":[{},{}]}}"#,
        mu[0],
        mu[1],
        a = q(0.5),
        b = q(0.6)
    );
    CorrelatorConfig::from_json(&text).unwrap()
}

fn small_opts(replicas: usize) -> EstimateOptions {
    EstimateOptions {
        rho: 0.01,
        replicas,
        seed: 5,
        window: Window {
            spacing: 0.2,
            ..Default::default()
        },
        ..Default::default()
    }
}

#[test]
fn smoothed_log_kernel_is_exact_beyond_the_support() {
    for m in [Mollifier::Bump, Mollifier::Gaussian] {
        let k = Kernel::new(m, 0.01);
        let r = k.reach();
        assert!((k.log_kernel(2.0 * r) + (2.0 * r).ln()).abs() < 1e-12);
        assert!((k.log_kernel(0.5) + 0.5f64.ln()).abs() < 1e-12);
        // continuity across the table edge
        assert!((k.log_kernel(2.0 * r * (1.0 - 1e-6)) - k.log_kernel(2.0 * r)).abs() < 1e-4);
        // smoothing a logarithm flattens it
        assert!(k.self_energy() < -(1e-4f64).ln());
        assert!(k.self_energy() > -k.rho.ln());
        // ln|x|₊ is untouched away from the unit circle and lifted on it
        assert_eq!(k.log_plus(Complex64::new(0.0, 2.0)), 2f64.ln());
        assert_eq!(k.log_plus(Complex64::new(0.3, 0.3)), 0.0);
        let on = k.log_plus(Complex64::new(0.0, 1.0));
        assert!(on > 0.0 && on < k.reach());
    }
}

#[test]
fn green_function_benchmark() {
    let g = green(Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0));
    assert!((g - (4.0f64 / 3.0).ln()).abs() < 1e-14);
}

#[test]
fn field_is_centred() {
    let pts = vec![Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0)];
    let s = GffSampler::new(pts, Mollifier::Bump, 0.01).unwrap();
    for k in 0..2 {
        let v = s.map_replicas(3, 10_000, |x| x.pairing(k, E1));
        let st = Stats::from_values(&v).unwrap();
        assert!(st.mean.abs() < 3.0 * st.stderr, "{st:?}");
    }
}

#[test]
fn replicas_replay_and_ignore_thread_count() {
    let pts: Vec<Complex64> = (0..20)
        .map(|k| Complex64::new(k as f64 * 0.1 - 1.0, 0.5))
        .collect();
    let s = GffSampler::new(pts, Mollifier::Bump, 0.01).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| s.map_replicas(9, 100, |x| x.values.clone()))
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a, b);
    let r = s.sample(9, 70);
    assert_eq!(r.replica, 70);
    for (x, y) in r.values.iter().zip(&a[70]) {
        assert!((x[0] - y[0]).abs() < 1e-12 && (x[1] - y[1]).abs() < 1e-12);
    }
    assert_ne!(a[0], a[1]);
}

#[test]
fn sampler_refusals() {
    let many = vec![Complex64::new(0.0, 1.0); MAX_POINTS + 1];
    assert!(matches!(
        GffSampler::new(many, Mollifier::Bump, 0.1),
        Err(GmcError::TooManyPoints(_))
    ));
    assert!(matches!(
        GffSampler::new(vec![Complex64::new(0.0, 1.0)], Mollifier::Bump, 0.0),
        Err(GmcError::BadRho(_))
    ));
    let twice = vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0)];
    assert!(matches!(
        GffSampler::new(twice, Mollifier::Bump, 0.1),
        Err(GmcError::NotPositiveDefinite(_))
    ));
    assert!(matches!(
        GffSampler::new(vec![Complex64::new(0.0, -1.0)], Mollifier::Bump, 0.1),
        Err(GmcError::Options(_))
    ));
}

#[test]
fn covariance_at_ten_probe_pairs() {
    let pairs = default_probe_pairs();
    assert_eq!(pairs.len(), 10);
    let r = covariance_check(&pairs, Mollifier::Bump, 0.005, 20_000, 1).unwrap();
    assert!((r.pairs[0].exact - 2.0 * (4.0f64 / 3.0).ln()).abs() < 1e-14);
    assert_eq!(r.pairs[1].exact, 0.0);
    assert!(r.pass, "{r:#?}");
}

#[test]
fn unmollified_prefactor_is_the_coulomb_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (n, m) in [(1, 1), (2, 0), (1, 3), (2, 2), (0, 3)] {
        let cfg = random_neutral_config(&mut rng, n, m, q_frac(1, 2));
        let table = coulomb_log_correlator(&cfg).unwrap();
        let exact = exact_log_prefactor(&vertices(&cfg), 0.5);
        assert!((exact - log_coulomb_value(&cfg, &table)).abs() < 1e-9 * exact.abs().max(1.0));
    }
}

#[test]
fn mollified_prefactor_matches_when_resolved() {
    let cfg = bench();
    let vs = vertices(&cfg);
    for m in [Mollifier::Bump, Mollifier::Gaussian] {
        let k = Kernel::new(m, 0.05);
        assert!((log_prefactor(&vs, &k, 0.6) - exact_log_prefactor(&vs, 0.6)).abs() < 1e-9);
    }
}

#[test]
fn zero_mode_integral() {
    // b = 0: Γ(κ) a^{−κ}
    let (l, e) = log_zero_mode(1.7, 2.5, 0.0).unwrap();
    assert!(
        (l - (statrs::function::gamma::ln_gamma(1.7) - 1.7 * 2.5f64.ln())).abs() < 1e-12
            && e == 0.0
    );
    // continuity as b → 0⁺
    let (lb, _) = log_zero_mode(1.7, 2.5, 1e-9).unwrap();
    assert!((lb - l).abs() < 1e-6);
    // a = 0: 2Γ(2κ) b^{−2κ}
    let (la, _) = log_zero_mode(0.8, 0.0, 3.0).unwrap();
    assert!(
        (la - (2f64.ln() + statrs::function::gamma::ln_gamma(1.6) - 1.6 * 3f64.ln())).abs() < 1e-9
    );
    // against a plain Riemann sum in y, mixed masses and a negative boundary term
    for (k, a, b) in [(0.4, 1.0, 0.7), (2.3, 0.2, -0.3), (1.0, 3.0, 5.0)] {
        let h = 1e-3;
        let s: f64 = (-60_000..20_000)
            .map(|j| j as f64 * h)
            .map(|y: f64| (k * y - a * y.exp() - b * (y / 2.0).exp()).exp() * h)
            .sum();
        let (l, _) = log_zero_mode(k, a, b).unwrap();
        assert!((l - s.ln()).abs() < 1e-6, "{k} {a} {b}: {l} vs {}", s.ln());
    }
    assert!(matches!(
        log_zero_mode(0.0, 1.0, 1.0),
        Err(GmcError::ZeroMode(_))
    ));
    assert!(matches!(
        log_zero_mode(1.0, 0.0, 0.0),
        Err(GmcError::ZeroMode(_))
    ));
    assert!(matches!(
        log_zero_mode(1.0, 0.0, -1.0),
        Err(GmcError::ZeroMode(_))
    ));
}

#[test]
fn zero_replicas_is_no_data() {
    let e = estimate_correlator(&massive([1.0, 1.0]), &small_opts(0)).unwrap_err();
    assert!(e.to_string().contains("no data"));
    assert!(matches!(
        estimate_correlator(&bench(), &small_opts(0)),
        Err(GmcError::NoData)
    ));
    assert!(matches!(Stats::from_values(&[]), Err(GmcError::NoData)));
}

#[test]
fn admissibility_errors_name_the_condition() {
    // neutral weights with μ ≠ 0: ⟨s, ω₁⟩ = 0
    let mut cfg = bench();
    cfg.mu_bulk = [1.0, 1.0];
    let e = estimate_correlator(&cfg, &small_opts(10)).unwrap_err();
    assert!(e.to_string().contains("omega_1"), "{e}");
    // non-neutral at μ = 0
    let mut cfg = massive([0.0, 0.0]);
    cfg.mu_bulk = [0.0; 2];
    assert!(matches!(
        estimate_correlator(&cfg, &small_opts(10)),
        Err(GmcError::NotNeutral(_))
    ));
    // a boundary weight beyond Q
    let text = format!(
        r#"{{"gamma":0.6,"boundary":[{{"s":0,"beta":[{b},{b}]}},{{"s":1,"beta":[{c},{c}]}}],"mu_bulk":[1,1]}}"#,
        b = q(1.1),
        c = q(1.2)
    );
    let e = estimate_correlator(
        &CorrelatorConfig::from_json(&text).unwrap(),
        &small_opts(10),
    )
    .unwrap_err();
    assert!(e.to_string().contains("beta_0 - Q, e_1"), "{e}");
    // no cosmological constant in direction 2
    let e = estimate_correlator(&massive([1.0, 0.0]), &small_opts(10)).unwrap_err();
    assert!(matches!(e, GmcError::ZeroMode(_)), "{e}");
}

#[test]
fn shifted_estimate_scales_with_the_cosmological_constant() {
    // with bulk masses only the zero mode gives exactly ∏ μᵢ^{−κᵢ}
    let opts = small_opts(200);
    let a = estimate_correlator(&massive([1.0, 1.0]), &opts).unwrap();
    let b = estimate_correlator(&massive([2.0, 3.0]), &opts).unwrap();
    let kappa = a.diagnostics.zero_mode.as_ref().unwrap().kappa;
    let expect = 2f64.powf(-kappa[0]) * 3f64.powf(-kappa[1]);
    assert!((b.estimate / a.estimate / expect - 1.0).abs() < 1e-10);
    assert_eq!(a.method, Method::Shifted);
    assert!(a.estimate > 0.0 && a.stderr.is_finite() && a.stderr > 0.0);
    // deterministic replay
    assert_eq!(a, estimate_correlator(&massive([1.0, 1.0]), &opts).unwrap());
}

#[test]
fn direct_estimator_reports_its_own_variance() {
    let opts = EstimateOptions {
        rho: 0.05,
        replicas: 1000,
        ..Default::default()
    };
    let e = estimate_correlator(&bench(), &opts).unwrap();
    assert_eq!(e.method, Method::DirectVertex);
    let d = &e.diagnostics;
    assert!((d.closed_form.unwrap() / d.log_prefactor.exp() - 1.0).abs() < 1e-9);
    // log-normal integrand: far too heavy-tailed for a percent-level average
    assert!(d.log_variance.unwrap() > 12.0);
    assert!(d.predicted_relative_stderr.unwrap() > 1.0);
}

#[test]
fn mu_b1_derivative_matches_quadrature() {
    let opts = EstimateOptions {
        rho: 0.02,
        replicas: 10_000,
        seed: 3,
        window: Window {
            delta: 0.1,
            epsilon: 0.1,
            ..Default::default()
        },
        ..Default::default()
    };
    let d = mu_b1_derivative(&bench(), &opts).unwrap();
    assert!(d.quadrature < 0.0);
    assert!(d.pass, "{d:?}");
    assert!(mu_b1_derivative(&massive([1.0, 1.0]), &opts).is_err());
}

#[test]
fn normalized_mass_is_stable() {
    let w = Window {
        delta: 0.1,
        ..Default::default()
    };
    let r = mass_stability(&w, 0.6, Mollifier::Bump, 0.02, 4000, 5).unwrap();
    assert!(r.pass, "{r:?}");
    let r = mass_stability(&w, 0.8, Mollifier::Bump, 0.02, 4000, 6).unwrap();
    assert!(r.pass, "{r:?}");
    let r = mollifier_swap(&w, 0.6, 0.02, 4000, 5).unwrap();
    assert!(r.pass, "{r:?}");
}

fn bulk_pair(a1: [f64; 2], a2: [f64; 2], b: f64) -> CorrelatorConfig {
    let text = format!(
        r#"{{"gamma":0.6,"bulk":[{{"z":[0,1],"alpha":[{},{}]}},{{"z":[0.3,1],"alpha":[{},{}]}}],
          "boundary":[{{"s":-1.5,"beta":[{b},{b}]}},{{"s":1.5,"beta":[{b},{b}]}}], "mu_bulk":[1,1]}}"#,
        a1[0], a1[1], a2[0], a2[1]
    );
    CorrelatorConfig::from_json(&text).unwrap()
}

fn bulk_opts() -> EstimateOptions {
    EstimateOptions {
        rho: 0.005,
        replicas: 300,
        seed: 11,
        window: Window {
            spacing: 0.1,
            epsilon: 0.02,
            ..Default::default()
        },
        ..Default::default()
    }
}

const BULK_LADDER: [f64; 5] = [0.1, 0.14, 0.2, 0.28, 0.4];
const BULK: FusionPair = FusionPair {
    kind: PairKind::Bulk,
    moving: 1,
    fixed: 0,
};

#[test]
fn boundary_fusion_slope_without_correction() {
    let text = format!(
        r#"{{"gamma":0.6,"bulk":[{{"z":[0,1],"alpha":[{a},{a}]}}],
          "boundary":[{{"s":-0.5,"beta":[{b},{b}]}},{{"s":0,"beta":[{b},{b}]}},{{"s":1,"beta":[{c},{c}]}},{{"s":1.5,"beta":[{c},{c}]}}],
          "mu_boundary":[[0,0],[0,0],[1,1],[0,0]]}}"#,
        a = q(0.9),
        b = q(0.2),
        c = q(0.05)
    );
    let cfg = CorrelatorConfig::from_json(&text).unwrap();
    let opts = EstimateOptions {
        rho: 0.001,
        replicas: 500,
        seed: 11,
        window: Window {
            boundary_spacing: 0.01,
            epsilon: 0.002,
            ..Default::default()
        },
        ..Default::default()
    };
    let pair = FusionPair {
        kind: PairKind::Boundary,
        moving: 1,
        fixed: 0,
    };
    let r = fusion_probe(&cfg, pair, &[0.005, 0.007, 0.01, 0.014, 0.02], &opts).unwrap();
    assert!(!r.correction_active);
    assert!((r.bound_exponent + 0.04 * 2.0 * q(1.0).powi(2) / 2.0).abs() < 1e-12);
    assert!(
        (r.slope - r.bound_exponent).abs() < SLOPE_TOLERANCE,
        "{r:?}"
    );
    assert!(r.bound_holds);
}

#[test]
fn zero_weight_pair_has_flat_slope() {
    let cfg = bulk_pair([q(0.5), q(0.5)], [0.0, 0.0], q(0.6));
    let r = fusion_probe(&cfg, BULK, &BULK_LADDER, &bulk_opts()).unwrap();
    assert_eq!(r.bound_exponent, 0.0);
    assert!(r.slope.abs() < SLOPE_TOLERANCE, "{r:?}");
}

#[test]
fn bulk_fusion_respects_the_bound() {
    let cfg = bulk_pair([q(0.3), q(0.3)], [q(0.3), q(0.3)], q(0.5));
    let r = fusion_probe(&cfg, BULK, &BULK_LADDER, &bulk_opts()).unwrap();
    assert!(!r.correction_active && r.bound_holds, "{r:?}");
    // correction term switched on: α₁ + α₂ = Q + 0.3e₂
    let a = [q(0.5), q(0.5) + 0.15];
    let r = fusion_probe(&bulk_pair(a, a, q(0.2)), BULK, &BULK_LADDER, &bulk_opts()).unwrap();
    assert!(r.correction_active && r.bound_holds, "{r:?}");
}

#[test]
fn fusion_refusals() {
    let cfg = bulk_pair([q(0.3), q(0.3)], [q(0.3), q(0.3)], q(0.5));
    let e = fusion_probe(&cfg, BULK, &[0.001, 0.1], &bulk_opts()).unwrap_err();
    assert!(
        matches!(e, GmcError::Ladder(_)) && e.to_string().contains("mollification"),
        "{e}"
    );
    assert!(matches!(
        fusion_probe(&cfg, BULK, &[0.1], &bulk_opts()),
        Err(GmcError::Ladder(_))
    ));
    let heavy = bulk_pair([q(0.6), q(0.6)], [q(0.6), q(0.6)], q(0.1));
    assert!(matches!(
        fusion_probe(&heavy, BULK, &BULK_LADDER, &bulk_opts()),
        Err(GmcError::Options(_))
    ));
}
