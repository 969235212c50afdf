use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use w3_hypnum::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn gamma_values_and_poles() {
    assert!(close(gamma_fn(1.0).unwrap(), 1.0, 1e-14));
    assert!(close(gamma_fn(0.5).unwrap(), PI.sqrt(), 1e-14));
    assert!(close(gamma_fn(5.0).unwrap(), 24.0, 1e-13));
    assert!(close(gamma_fn(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-13));
    assert!(matches!(gamma_fn(0.0), Err(NumError::GammaPole(_))));
    assert!(matches!(gamma_fn(-3.0), Err(NumError::GammaPole(_))));
    assert!(matches!(
        g_constant(1.0),
        Err(NumError::DegenerateCoupling(_))
    ));
}

#[test]
fn integrals_match_closed_forms() {
    for gamma in [0.3, 0.5, 0.7, 0.9] {
        for pair in special_integrals(gamma).unwrap() {
            assert!(pair.rel_diff() < 1e-6, "gamma {gamma}: {pair:?}");
            assert!(pair.rel_diff() < 1e-10, "gamma {gamma}: {pair:?}");
        }
    }
}

#[test]
fn line_integral_tends_to_pi() {
    let q = integral_line(1e-3, QUAD_TOL).unwrap();
    assert!((q.value - PI).abs() < 1e-5, "{}", q.value);
    assert!((closed_forms(1e-3).unwrap()[2] - PI).abs() < 1e-5);
}

#[test]
fn integrals_refuse_gamma_above_one() {
    assert!(matches!(
        special_integrals(1.1),
        Err(NumError::OutOfRange(_))
    ));
    assert!(matches!(
        integral_minus(1.0, 1e-10),
        Err(NumError::OutOfRange(_))
    ));
}

#[test]
fn beta_weighted_against_beta_function() {
    let (p, q) = (0.3, 0.7);
    let b = gamma_fn(p).unwrap() * gamma_fn(q).unwrap() / gamma_fn(p + q).unwrap();
    assert!(close(
        beta_weighted(p, q, |_| 1.0, 1e-13).unwrap().value,
        b,
        1e-12
    ));
}

#[test]
fn indicial_polynomial_and_recurrence() {
    let params = HypParams {
        a: [0.3, -0.7, 1.1],
        b: [0.5, 1.4],
    };
    let op = EulerOperator::hypergeometric(&params);
    for s in SeriesSolution::exponents(&params) {
        assert!(op.indicial().eval(s).abs() < 1e-14);
    }
    // the hand-written hypergeometric ratio is a consequence, not an input
    let (num, den) = op.recurrence_factors(0.0, 3);
    let expect_num = (0.3 + 2.0) * (-0.7 + 2.0) * (1.1 + 2.0);
    let expect_den = 3.0 * (3.0 + 0.5 - 1.0) * (3.0 + 1.4 - 1.0);
    assert!(close(num, expect_num, 1e-14) && close(den, expect_den, 1e-14));
}

#[test]
fn series_at_origin_is_one() {
    let params = HypParams {
        a: [0.3, 0.2, 0.1],
        b: [0.5, 1.3],
    };
    assert_eq!(series_eval(&params, 0.0, 0.0).unwrap(), 1.0);
    assert!(matches!(
        series_eval(&params, 0.5, 0.0),
        Err(NumError::SingularOrigin { .. })
    ));
    assert!(matches!(
        series_eval(&params, 0.0, 1.0),
        Err(NumError::Radius(_))
    ));
}

#[test]
fn terminating_series_is_linear() {
    let params = HypParams {
        a: [-1.0, 0.4, 1.7],
        b: [0.5, 1.3],
    };
    let c1 = -1.0 * 0.4 * 1.7 / (1.0 * 0.5 * 1.3);
    for u in [0.3, -0.45, 0.49] {
        let v = series_eval(&params, 0.0, u).unwrap();
        assert!((v - (1.0 + c1 * u)).abs() < 1e-15, "{u}: {v}");
    }
    // integrate the polynomial from 0.1 to 0.9
    let s = SeriesSolution::new(&params, 0.0).unwrap();
    let d = s.eval_derivs(0.1).unwrap();
    let out = ode_integrate(&params, 0.1, [d[0], d[1], d[2]], 0.9).unwrap();
    assert!((out[0] - (1.0 + c1 * 0.9)).abs() < 1e-9);
    assert!((out[1] - c1).abs() < 1e-9 && out[2].abs() < 1e-9);
}

#[test]
fn resonance_is_refused() {
    let params = HypParams {
        a: [0.3, 0.2, 0.1],
        b: [-1.0, 1.3],
    };
    // exponents 0 and 2: the 0-series hits R(2) = 0
    assert!(matches!(
        SeriesSolution::new(&params, 0.0),
        Err(NumError::Resonance(2))
    ));
    assert!(SeriesSolution::new(&params, 2.0).is_ok());
}

#[test]
fn zero_data_stays_zero() {
    let params = HypParams {
        a: [0.3, 0.2, 0.1],
        b: [0.5, 1.3],
    };
    assert_eq!(
        ode_integrate(&params, 0.2, [0.0; 3], 0.7).unwrap(),
        [0.0; 3]
    );
    assert!(matches!(
        ode_integrate(&params, 0.2, [1.0; 3], 1.2),
        Err(NumError::SingularPath { .. })
    ));
    assert!(matches!(
        ode_integrate(&params, -0.2, [1.0; 3], 0.2),
        Err(NumError::SingularPath { .. })
    ));
}

pub fn random_params(rng: &mut impl Rng) -> HypParams {
    loop {
        let a = [
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        ];
        let b = [rng.random_range(0.1..2.6), rng.random_range(0.1..2.6)];
        let ex = SeriesSolution::exponents(&HypParams { a, b });
        let separated = (0..3).all(|i| {
            (0..i).all(|j| {
                let d = ex[i] - ex[j];
                (d - d.round()).abs() > 0.05
            })
        });
        if separated {
            return HypParams { a, b };
        }
    }
}

#[test]
fn series_solves_the_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let params = random_params(&mut rng);
        for sigma in SeriesSolution::exponents(&params) {
            let s = SeriesSolution::new(&params, sigma).unwrap();
            for u in [0.4, -0.3] {
                let r = s.residual(u).unwrap();
                assert!(r < 1e-10, "{params:?} sigma {sigma} u {u}: {r}");
            }
        }
    }
}

#[test]
fn series_and_ode_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let params = random_params(&mut rng);
        for sigma in SeriesSolution::exponents(&params) {
            let s = SeriesSolution::new(&params, sigma).unwrap();
            for (u0, u1) in [(0.2, 0.5), (0.5, 0.05), (-0.2, -0.5)] {
                let d = s.eval_derivs(u0).unwrap();
                let got = ode_integrate(&params, u0, [d[0], d[1], d[2]], u1).unwrap();
                let want = s.eval_derivs(u1).unwrap();
                let scale = want[0].abs().max(d[0].abs());
                assert!(
                    (got[0] - want[0]).abs() <= 1e-8 * scale,
                    "{params:?} sigma {sigma} {u0}->{u1}: {} vs {}",
                    got[0],
                    want[0]
                );
            }
        }
    }
}

#[test]
fn frobenius_solutions_are_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let params = random_params(&mut rng);
        let (_, cond) = frobenius_condition(&params, 0.1).unwrap();
        assert!(cond.is_finite() && cond < 1e12, "{params:?}: {cond}");
    }
}
