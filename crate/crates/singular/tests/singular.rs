use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use w3_algebra::{CartanVector, Couplings, GammaRational};
use w3_forms::{Chi, Partition, Weight};
use w3_hypnum::gamma_fn;
use w3_singular::*;

fn g() -> GammaRational {
    GammaRational::gamma()
}

#[test]
fn level_one_coefficient() {
    let kappa = GammaRational::frac(1, 3);
    let w = Weight::semi_degenerate(1, kappa.clone()).unwrap();
    let spec = build_singular(1, &w).unwrap();
    let q = Couplings::symbolic().q;
    let expect = -(q - kappa * GammaRational::frac(2, 3));
    assert_eq!(
        spec.coefficient(Descendant::L(Partition::Single(1))),
        Some(&expect)
    );
}

#[test]
fn level_two_and_three_coefficients() {
    let spec = build_singular(2, &Weight::fully_degenerate(Chi::Gamma)).unwrap();
    assert_eq!(
        spec.coefficient(Descendant::W(2)),
        Some(&GammaRational::int(1))
    );
    assert_eq!(
        spec.coefficient(Descendant::L(Partition::OneOne)),
        Some(&(GammaRational::int(4) / g()))
    );
    assert_eq!(
        spec.coefficient(Descendant::L(Partition::Single(2))),
        Some(&(GammaRational::frac(4, 3) * g()))
    );
    let spec = build_singular(3, &Weight::fully_degenerate(Chi::TwoOverGamma)).unwrap();
    assert_eq!(
        spec.coefficient(Descendant::L(Partition::OneOneOne)),
        Some(&-(g() * g() * g()))
    );
}

#[test]
fn null_forms_vanish() {
    for kappa in [
        GammaRational::frac(1, 3),
        g() - GammaRational::frac(1, 2),
        GammaRational::int(2) / g(),
    ] {
        for index in [1, 2] {
            let spec =
                build_singular(1, &Weight::semi_degenerate(index, kappa.clone()).unwrap()).unwrap();
            assert!(
                verify_null_form(&spec).unwrap().is_zero(),
                "index {index}, kappa {kappa}"
            );
        }
    }
    for chi in Chi::BOTH {
        for level in [2, 3] {
            let spec = build_singular(level, &Weight::fully_degenerate(chi)).unwrap();
            let r = verify_null_form(&spec).unwrap();
            assert!(r.is_zero(), "level {level} chi {chi}: {r}");
        }
    }
}

#[test]
fn level_one_with_symbolic_kappa() {
    assert!(level_one_symbolic_residual(1).unwrap().is_zero());
    assert!(level_one_symbolic_residual(2).unwrap().is_zero());
}

#[test]
fn ratio_identity_is_exact() {
    assert!(num_traits::Zero::is_zero(&ratio_identity_residual()));
}

#[test]
fn generic_combination_is_not_null() {
    // the level-two combination on a semi-degenerate weight is not singular
    let w = Weight::fully_degenerate(Chi::Gamma);
    let mut spec = build_singular(2, &w).unwrap();
    spec.weight = Weight::generic(CartanVector::omega1().scale(&GammaRational::frac(1, 2)));
    assert!(!verify_null_form(&spec).unwrap().is_zero());
}

#[test]
fn wrong_tags_and_vanishing_weight() {
    let full = Weight::fully_degenerate(Chi::Gamma);
    assert!(matches!(
        build_singular(1, &full),
        Err(SingularError::WrongTag { .. })
    ));
    let semi = Weight::semi_degenerate(1, GammaRational::int(1)).unwrap();
    assert!(matches!(
        build_singular(2, &semi),
        Err(SingularError::WrongTag { .. })
    ));
    assert!(matches!(
        build_singular(4, &full),
        Err(SingularError::Level(4))
    ));
    let zero = Weight::semi_degenerate(1, GammaRational::int(0)).unwrap();
    assert!(matches!(
        build_singular(1, &zero),
        Err(SingularError::RatioUndefined(_))
    ));
    let three_q =
        Weight::semi_degenerate(1, Couplings::symbolic().q * GammaRational::int(3)).unwrap();
    assert!(matches!(
        build_singular(1, &three_q),
        Err(SingularError::RatioUndefined(_))
    ));
}

#[test]
fn four_level_one_solves_are_unique_and_exact() {
    let instances = reference_instances();
    assert_eq!(instances.len(), 4);
    for (name, target, base) in instances {
        let sol = solve_d1(&target, &base).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(sol.reconstruction_residual().unwrap().is_zero(), "{name}");
    }
}

#[test]
fn solve_with_target_equal_to_base() {
    let base = CartanVector::new(GammaRational::frac(1, 2), g());
    let sol = solve_d1(&base, &base).unwrap();
    assert_eq!(
        (sol.a, sol.b),
        (GammaRational::int(1), GammaRational::int(0))
    );
}

#[test]
fn semi_degenerate_base_is_degenerate() {
    let base = CartanVector::omega1().scale(&GammaRational::frac(1, 2));
    let err = solve_d1(&CartanVector::e2(), &base).unwrap_err();
    assert!(
        matches!(
            err,
            SingularError::Degenerate {
                relation: "outside",
                ..
            }
        ),
        "{err}"
    );
}

fn g_const(gamma: f64) -> f64 {
    let s = gamma * gamma;
    gamma_fn(s / 2.0).unwrap() * gamma_fn(1.0 - s).unwrap() / gamma_fn(1.0 - s / 2.0).unwrap()
}

#[test]
fn eom_constant_values() {
    assert_eq!(
        eom_constant(EomConstant::CGamma, 0.7, 0.0, 0.0, 0.0).unwrap(),
        0.0
    );
    let v = eom_constant(EomConstant::CGamma, 0.7, 1.0, 0.0, 0.0).unwrap();
    let want = gamma_fn(0.245).unwrap() * gamma_fn(0.51).unwrap() / gamma_fn(0.755).unwrap();
    assert!((v - want).abs() < 1e-12 * want);
    let gamma: f64 = 0.6;
    let t = PI * gamma * gamma / 2.0;
    let mu = 1.3;
    let mu_b = 2.0 * mu * mu * (1.0 - t.cos()) / t.sin();
    assert!(
        eom_constant(EomConstant::CGamma, gamma, mu, mu, mu_b)
            .unwrap()
            .abs()
            < 1e-12
    );
    assert!(matches!(
        eom_constant(EomConstant::C1, 1.0, 1.0, 0.0, 0.0),
        Err(SingularError::Num(_))
    ));
    assert_eq!(
        eom_constant(EomConstant::C2, 1.2, 1.0, 0.5, 0.3).unwrap(),
        0.0
    );
}

#[test]
fn eom_constant_decomposes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let gamma = rng.random_range(0.05..1.4);
        if (gamma * gamma - 1.0f64).abs() < 1e-3 {
            continue;
        }
        let (l, r, b) = (
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(0.0..3.0),
        );
        let c = eom_constant(EomConstant::CGamma, gamma, l, r, b).unwrap();
        let lhs = if gamma < 1.0 { c } else { 0.0 };
        let rhs = eom_constant(EomConstant::C1, gamma, l, r, b).unwrap()
            + eom_constant(EomConstant::C2, gamma, l, r, b).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(g_const(gamma).abs()),
            "{gamma}: {lhs} vs {rhs}"
        );
    }
}

fn mu(gamma: f64, l: [f64; 2], r: [f64; 2], b: f64) -> MuData {
    MuData {
        gamma,
        mu_l: l,
        mu_r: r,
        mu_b1: b,
    }
}

#[test]
fn level_one_rhs() {
    let w = Weight::semi_degenerate(1, GammaRational::frac(1, 2)).unwrap();
    let rhs = eom_rhs(1, &w, &mu(0.5, [1.0, 2.0], [3.0, 2.0], 0.0)).unwrap();
    assert!(rhs.null);
    let rhs = eom_rhs(1, &w, &mu(0.5, [1.0, 2.0], [1.0, 1.5], 0.0)).unwrap();
    let q = 0.5 + 4.0;
    assert!((rhs.terms[0].coefficient - 2.0 * (q - 0.5) * 0.5).abs() < 1e-12);
    // κ = q kills the coefficient whatever the jump
    let at_q = Weight::semi_degenerate(1, Couplings::symbolic().q).unwrap();
    assert!(
        eom_rhs(1, &at_q, &mu(0.5, [0.0, 2.0], [0.0, 1.0], 0.0))
            .unwrap()
            .null
    );
}

#[test]
fn level_two_rhs() {
    let m = mu(0.6, [0.4, 1.0], [0.7, 1.5], 0.2);
    let rhs = eom_rhs(2, &Weight::fully_degenerate(Chi::TwoOverGamma), &m).unwrap();
    assert!((rhs.terms[0].coefficient - 2.0 * 0.6 * 0.5).abs() < 1e-12);
    assert!((rhs.terms[1].coefficient - 2.0 * (2.0 / 0.6 - 0.6) * 1.1).abs() < 1e-12);
    let rhs = eom_rhs(2, &Weight::fully_degenerate(Chi::Gamma), &m).unwrap();
    let c = eom_constant(EomConstant::CGamma, 0.6, 0.4, 0.7, 0.2).unwrap();
    assert!((rhs.terms[1].coefficient - 2.0 * 0.6 * c).abs() < 1e-12);
    match &rhs.terms[0].field {
        Field::D1 { weight, operator } => {
            assert_eq!(
                weight,
                &(Weight::fully_degenerate(Chi::Gamma).vector + CartanVector::e2().scale(&g()))
            );
            assert!(operator.reconstruction_residual().unwrap().is_zero());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn level_three_rhs_descends_from_level_two() {
    let m = mu(0.6, [0.4, 1.0], [0.7, 1.0], 0.2);
    for chi in Chi::BOTH {
        let two = eom_rhs(2, &Weight::fully_degenerate(chi), &m).unwrap();
        let three = eom_rhs(3, &Weight::fully_degenerate(chi), &m).unwrap();
        assert!(matches!(three.status, EomStatus::Covered));
        let x = chi.eval(0.6);
        let want = -2.0 / (x * x) * two.terms[1].coefficient;
        assert!(
            (three.terms[0].coefficient - want).abs() < 1e-12 * want.abs(),
            "{chi}"
        );
        assert!(three.d2_table.as_ref().unwrap().unverified);
    }
    let jump = mu(0.6, [0.4, 1.0], [0.7, 1.2], 0.2);
    let three = eom_rhs(3, &Weight::fully_degenerate(Chi::Gamma), &jump).unwrap();
    assert!(matches!(three.status, EomStatus::NotCovered { .. }) && !three.null);
}

#[test]
fn rhs_serializes() {
    let m = mu(0.6, [0.4, 1.0], [0.7, 1.0], 0.2);
    let rhs = eom_rhs(2, &Weight::fully_degenerate(Chi::Gamma), &m).unwrap();
    let v = serde_json::to_value(&rhs).unwrap();
    assert_eq!(v["status"]["status"], "covered");
    assert_eq!(v["terms"][0]["field"]["kind"], "d1");
}
