use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use w3_algebra::{q_frac, CartanVector, Couplings, GammaRational, Q};
use w3_forms::{l_form_with, FieldPolynomial, Partition};
use w3_freefield::*;

fn entries_without(
    cfg: &CorrelatorConfig,
    probe: usize,
) -> (Vec<Entry<GammaRational>>, CartanVector<GammaRational>) {
    let mut e = doubled_insertions_symbolic(cfg);
    let p = e.remove(probe);
    (e, p.weight)
}

fn at_gamma(e: &[Entry<GammaRational>], g: &Q) -> Vec<Entry<Q>> {
    e.iter()
        .map(|x| Entry {
            x: Complex::new(x.x.re.as_constant().unwrap(), x.x.im.as_constant().unwrap()),
            weight: x.weight.map(|c| c.eval_q(g).unwrap()),
            origin: x.origin,
        })
        .collect()
}

fn bulk(z: (i64, i64), a: CartanVector) -> BulkInsertion {
    BulkInsertion {
        z: Complex::new(q_frac(z.0, 1), q_frac(z.1, 1)),
        alpha: w3_forms::Weight::generic(a),
    }
}

fn boundary(s: i64, b: CartanVector) -> BoundaryInsertion {
    BoundaryInsertion {
        s: q_frac(s, 1),
        beta: w3_forms::Weight::generic(b),
    }
}

#[test]
fn doubled_list_sizes() {
    let a = CartanVector::e1();
    let one_one = CorrelatorConfig::new(
        q_frac(1, 2),
        vec![bulk((0, 1), a.clone())],
        vec![boundary(0, a.clone())],
    )
    .unwrap();
    assert_eq!(doubled_insertions(&one_one).len(), 3);
    let three = CorrelatorConfig::new(
        q_frac(1, 2),
        vec![],
        (0..3).map(|s| boundary(s, a.clone())).collect(),
    )
    .unwrap();
    assert_eq!(doubled_insertions(&three).len(), 3);
    let two = CorrelatorConfig::new(
        q_frac(1, 2),
        vec![bulk((0, 1), a.clone()), bulk((2, 3), a)],
        vec![],
    )
    .unwrap();
    let e = doubled_insertions(&two);
    assert_eq!(e.len(), 4);
    assert_eq!(e[2].origin, Origin::Mirror(0));
    assert_eq!(e[2].x, e[0].x.conj());
    assert_eq!(e[3].weight, e[1].weight);
}

#[test]
fn exponent_table_matches_pair_pairings() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = random_neutral_config(&mut rng, 2, 1, q_frac(1, 2));
    let table = coulomb_log_correlator(&cfg).unwrap();
    let e = doubled_insertions_symbolic(&cfg);
    let ex = |a: usize, b: usize| {
        table
            .iter()
            .find(|p| p.a == a && p.b == b)
            .unwrap()
            .exponent
            .clone()
    };
    let (a1, a2) = (&cfg.bulk[0].alpha.vector, &cfg.bulk[1].alpha.vector);
    // |z₁ − z₂| collects the (z₁,z₂) and (z̄₁,z̄₂) pairs
    assert_eq!(ex(0, 1) + ex(2, 3), -a1.inner(a2));
    // self pair (z₁, z̄₁)
    assert_eq!(ex(0, 2), -a1.norm2() * GammaRational::frac(1, 2));
    assert_eq!(e.len(), 5);
}

#[test]
fn non_neutral_closed_form_is_refused() {
    let cfg = CorrelatorConfig::new(q_frac(1, 2), vec![bulk((0, 1), CartanVector::e1())], vec![])
        .unwrap();
    let err = coulomb_log_correlator(&cfg).unwrap_err();
    assert!(err.to_string().contains("requires neutrality"));
}

#[test]
fn level_one_insertion_is_the_pole_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = random_neutral_config(&mut rng, 1, 2, q_frac(1, 2));
    let (e, beta) = entries_without(&cfg, 3);
    let got = ipp_insert(&FieldPolynomial::linear(&beta, 1), &e);
    for (k, entry) in e.iter().enumerate() {
        let expect = entry.weight.inner(&beta) * GammaRational::frac(1, 2);
        assert_eq!(got.coeff(k, 1), Complex::new(expect, GammaRational::zero()));
    }
    assert!(ipp_insert(&FieldPolynomial::<GammaRational>::zero(3), &e).is_zero());
}

#[test]
fn probe_collision_is_an_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = random_neutral_config(&mut rng, 1, 1, q_frac(1, 2));
    let e = doubled_insertions(&cfg);
    let f = FieldPolynomial::linear(&CartanVector::<Q>::e1(), 1);
    assert_eq!(
        ipp_eval(&f, &e, &e[1].x),
        Err(FreeFieldError::ProbeCollision(1))
    );
}

#[test]
fn pole_arithmetic_agrees_with_pointwise_evaluation() {
    let pts: Arc<Vec<C<Q>>> = Arc::new(vec![
        Complex::new(q_frac(1, 2), q_frac(1, 1)),
        Complex::new(q_frac(-3, 1), q_frac(0, 1)),
        Complex::new(q_frac(2, 1), q_frac(-1, 3)),
    ]);
    let c = |a: i64, b: i64| Complex::new(q_frac(a, b), q_frac(b, a.abs() + 1));
    let f = RationalField::pole(pts.clone(), 0, 2, c(3, 2))
        .add(&RationalField::pole(pts.clone(), 1, 1, c(-1, 3)))
        .add(&RationalField::constant(pts.clone(), c(2, 5)));
    let g = RationalField::pole(pts.clone(), 2, 3, c(5, 7)).add(&RationalField::pole(
        pts.clone(),
        0,
        1,
        c(1, 1),
    ));
    let t = Complex::new(q_frac(7, 3), q_frac(5, 11));
    let prod = f.mul(&g);
    assert_eq!(
        prod.eval(&t).unwrap(),
        f.eval(&t).unwrap() * g.eval(&t).unwrap()
    );
    // derivative by a symmetric difference of the exact partial fractions
    let d = f.derivative();
    let u0: C<Q> = Complex::new(q_frac(1, 1), q_frac(0, 1)) / (pts[0].clone() - t.clone());
    let expect = c(3, 2) * u0.powu(3) * Complex::new(q_frac(2, 1), q_frac(0, 1))
        + c(-1, 3)
            * (Complex::new(q_frac(1, 1), q_frac(0, 1)) / (pts[1].clone() - t.clone())).powu(2);
    assert_eq!(d.eval(&t).unwrap(), expect);
}

#[test]
fn insertion_is_linear_in_the_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = random_neutral_config(&mut rng, 2, 1, q_frac(1, 2));
    let (e, beta) = entries_without(&cfg, 4);
    let c = Couplings::symbolic();
    let f = l_form_with(Partition::OneTwo, &beta, &c);
    let g = l_form_with(Partition::Single(3), &beta, &c);
    let a = GammaRational::frac(2, 7) + GammaRational::gamma();
    let comb = f.checked_add_scaled(&a, &g).unwrap();
    let lhs = ipp_insert(&comb, &e);
    let rhs =
        ipp_insert(&f, &e).add_scaled(&Complex::new(a, GammaRational::zero()), &ipp_insert(&g, &e));
    assert!(lhs.sub(&rhs).is_zero());
}

const IDENTITY_PARTITIONS: [Partition; 5] = [
    Partition::Single(1),
    Partition::Single(2),
    Partition::OneOne,
    Partition::OneTwo,
    Partition::OneOneOne,
];

#[test]
fn derivative_identities_hold_symbolically() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = Couplings::symbolic();
    for (n, m) in [(1, 1), (0, 3), (2, 1)] {
        let cfg = random_neutral_config(&mut rng, n, m + 1, q_frac(1, 2));
        let probe = 2 * n + m;
        let (e, beta) = entries_without(&cfg, probe);
        for lambda in IDENTITY_PARTITIONS {
            let r = derivative_identity_residual(lambda, &beta, &e, &c).unwrap();
            assert!(r.is_zero(), "{lambda:?} on N={n}, M={m}: {r}");
        }
    }
}

#[test]
fn derivative_identities_hold_at_random_couplings() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..12 {
        let (n, m) = (trial % 3, trial % 4);
        let g = q_frac(1 + trial as i64, 13);
        let cfg = random_neutral_config(&mut rng, n, m + 1, g.clone());
        let (e, beta) = entries_without(&cfg, 2 * n + m);
        let e = at_gamma(&e, &g);
        let beta = beta.map(|x| x.eval_q(&g).unwrap());
        let c = Couplings::from_gamma(g.clone());
        for lambda in IDENTITY_PARTITIONS {
            assert!(
                derivative_identity_residual(lambda, &beta, &e, &c)
                    .unwrap()
                    .is_zero(),
                "{lambda:?} trial {trial}"
            );
        }
    }
}

#[test]
fn derivative_identity_needs_neutrality() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let cfg = random_neutral_config(&mut rng, 1, 2, q_frac(1, 2));
    let (e, beta) = entries_without(&cfg, 3);
    let off = beta + CartanVector::e1();
    let r = derivative_identity_residual(Partition::OneTwo, &off, &e, &Couplings::symbolic());
    assert!(matches!(r, Err(FreeFieldError::NotNeutral(_))));
}

#[test]
fn global_ward_rows_vanish_symbolically() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let c = Couplings::symbolic();
    for (n, m) in [(1, 1), (0, 3), (2, 0), (1, 2)] {
        let cfg = random_neutral_config(&mut rng, n, m, q_frac(1, 2));
        let e = doubled_insertions_symbolic(&cfg);
        let r = global_ward_residuals(&e, &c, &GammaRational::gamma()).unwrap();
        assert_eq!((r.virasoro.len(), r.w.len()), (3, 5));
        assert!(r.all_zero(), "N={n}, M={m}: {r:?}");
    }
}

#[test]
fn global_ward_rows_vanish_at_random_couplings() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for trial in 0..20usize {
        let (n, m) = (trial % 3, (trial / 3) % 4);
        if n + m == 0 {
            continue;
        }
        let g = q_frac(2 + trial as i64, 17);
        let cfg = random_neutral_config(&mut rng, n, m, g.clone());
        let e = doubled_insertions(&cfg);
        let r = global_ward_residuals(&e, &cfg.couplings(), &g).unwrap();
        assert!(r.all_zero(), "trial {trial}");
    }
}

#[test]
fn ward_rows_are_not_vacuous() {
    // dropping the W₋₁ terms from the m = 1 row leaves a nonzero remainder
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = q_frac(3, 5);
    let cfg = random_neutral_config(&mut rng, 1, 2, g.clone());
    let e = doubled_insertions(&cfg);
    let c = cfg.couplings();
    let partial = (0..e.len()).fold(C::<Q>::zero(), |acc, k| {
        let d = insertion_data(&e, k, &c, &g).unwrap();
        acc + e[k].x.clone() * d.w2
    });
    assert!(!partial.is_zero());
}

#[test]
fn config_json_round_trip_and_flags() {
    let text = r#"{
        "gamma": 0.5,
        "bulk": [{"z": [0, 1], "alpha": ["1/4", 0.25]}],
        "boundary": [{"s": -1, "beta": [0.5, 0.5]}, {"s": 2, "beta": [1, 1]}],
        "mu_bulk": [1.0, 2.0],
        "mu_boundary": [[0.1, 0.2], [0.3, 0.4]]
    }"#;
    let cfg = CorrelatorConfig::from_json(text).unwrap();
    assert_eq!(cfg.arcs(), 2);
    assert_eq!(cfg.mu_around(0), ([0.3, 0.4], [0.1, 0.2]));
    assert_eq!(cfg.mu_around(1), ([0.1, 0.2], [0.3, 0.4]));
    let back = CorrelatorConfig::from_json(&cfg.to_json().to_string()).unwrap();
    assert_eq!(back, cfg);
    // s = (1/4+1/4+1/2, same) − (γ+2/γ)ρ: negative, so not in the admissible set
    assert!(!cfg.seiberg_ok());
    assert!(!cfg.neutral());
}

#[test]
fn seiberg_flag_accepts_large_total_charge() {
    let g = q_frac(1, 2);
    let q = Couplings::symbolic().background();
    let small = CartanVector::rho().scale(&GammaRational::frac(1, 1));
    // three bulk weights ρ each: ⟨α−Q, eᵢ⟩ = 1 − q < 0, and s = 3ρ − Q = (3 − q)ρ < 0 at γ = 1/2
    let cfg = CorrelatorConfig::new(
        g.clone(),
        (1..=3).map(|k| bulk((k, 1), small.clone())).collect(),
        vec![],
    )
    .unwrap();
    assert!(!cfg.seiberg_ok());
    let big = q.scale(&GammaRational::frac(2, 5));
    let cfg = CorrelatorConfig::new(
        g,
        (1..=3).map(|k| bulk((k, 1), big.clone())).collect(),
        vec![],
    )
    .unwrap();
    assert!(cfg.seiberg_ok());
}

#[test]
fn config_errors_carry_pointers() {
    let bad_type = r#"{"gamma": 0.5, "bulk": [{"z": [0, "x"], "alpha": [1, 0]}]}"#;
    match CorrelatorConfig::from_json(bad_type).unwrap_err() {
        FreeFieldError::Config { pointer, .. } => {
            assert!(pointer.starts_with("/bulk/0/z"), "{pointer}")
        }
        e => panic!("{e}"),
    }
    let below = r#"{"gamma": 0.5, "bulk": [{"z": [0, -1], "alpha": [1, 0]}]}"#;
    assert!(matches!(
        CorrelatorConfig::from_json(below),
        Err(FreeFieldError::Config { .. })
    ));
    let unsorted =
        r#"{"gamma": 0.5, "boundary": [{"s": 1, "beta": [1, 0]}, {"s": 0, "beta": [1, 0]}]}"#;
    assert!(CorrelatorConfig::from_json(unsorted)
        .unwrap_err()
        .to_string()
        .contains("increasing"));
    let big_gamma = r#"{"gamma": 1.5}"#;
    assert!(CorrelatorConfig::from_json(big_gamma).is_err());
    let unknown = r#"{"gamma": 0.5, "extra": 1}"#;
    assert!(CorrelatorConfig::from_json(unknown).is_err());
}

#[test]
fn tagged_weights_are_validated() {
    let ok = r#"{"gamma": 0.5, "boundary": [{"s": 0, "beta": [{"num":["-2/3"],"den":["1"]}, {"num":["-1/3"],"den":["1"]}],
        "tag": {"kind": "semi_degenerate", "index": 1, "kappa": "-1"}}]}"#;
    assert!(CorrelatorConfig::from_json(ok).is_ok());
    let bad = r#"{"gamma": 0.5, "boundary": [{"s": 0, "beta": [1, 0], "tag": {"kind": "fully_degenerate", "chi": "gamma"}}]}"#;
    assert!(matches!(
        CorrelatorConfig::from_json(bad),
        Err(FreeFieldError::Config { .. })
    ));
}

#[test]
fn coulomb_value_of_a_two_point_boundary_config() {
    // β₁ = β₂ = Q: exponent −|Q|²/2 on |s₁ − s₂| = 2
    let q = Couplings::symbolic().background();
    let cfg = CorrelatorConfig::new(
        q_frac(1, 2),
        vec![],
        vec![boundary(-1, q.clone()), boundary(1, q)],
    )
    .unwrap();
    assert!(cfg.neutral());
    let table = coulomb_log_correlator(&cfg).unwrap();
    let qv = 0.5 + 4.0;
    let expect = -(2.0 * qv * qv) / 2.0 * 2f64.ln();
    assert!((log_coulomb_value(&cfg, &table) - expect).abs() < 1e-12);
}
