use proptest::prelude::*;
use w3_algebra::{q_frac, CartanVector, Couplings, GammaRational, Poly};
use w3_forms::miura::{c1_residual, c2_residual, c3_residual, search, stress_tensor};
use w3_forms::{
    combine, l_form, miura_w_form, ope_mode, realization, Chi, FieldMonomial, FieldPolynomial,
    FormError, Partition, Weight,
};

fn gr(n: i64, d: i64) -> GammaRational {
    GammaRational::frac(n, d)
}

fn vec2(a: GammaRational, b: GammaRational) -> CartanVector {
    CartanVector::new(a, b)
}

fn generic_alpha() -> CartanVector {
    vec2(gr(3, 7), GammaRational::gamma() - gr(1, 2))
}

#[test]
fn level_one_form_is_the_linear_term() {
    let a = generic_alpha();
    assert_eq!(
        l_form(Partition::Single(1), &a),
        FieldPolynomial::linear(&a, 1)
    );
}

#[test]
fn zero_weight_kills_l11() {
    assert!(l_form(Partition::OneOne, &CartanVector::zero()).is_zero());
}

#[test]
fn level_two_linear_part() {
    let a = generic_alpha();
    let c = Couplings::symbolic();
    let lin = l_form(Partition::Single(2), &a)
        .checked_add(&FieldPolynomial::pairing(1, 1))
        .unwrap();
    assert_eq!(lin, FieldPolynomial::linear(&(c.background() + a), 2));
}

#[test]
fn unsupported_partition_names_supported_set() {
    let err = "2,2".parse::<Partition>().unwrap_err();
    assert!(matches!(err, FormError::UnsupportedPartition { .. }));
    assert!(err.to_string().contains("(1,1,1)"));
    assert_eq!("1,2".parse::<Partition>().unwrap(), Partition::OneTwo);
    assert_eq!("(3)".parse::<Partition>().unwrap(), Partition::Single(3));
}

#[test]
fn stress_tensor_modes_reproduce_the_l_table() {
    let c = Couplings::symbolic();
    let t = stress_tensor(&c);
    let a = generic_alpha();
    for n in 1..=5u32 {
        assert_eq!(
            ope_mode(&t, n as i64, &a, 1),
            l_form(Partition::Single(n), &a),
            "n = {n}"
        );
    }
    // double pole gives the conformal weight
    assert_eq!(
        ope_mode(&t, 0, &a, 1).constant_term(),
        c.conformal_weight(&a)
    );
}

#[test]
fn exactly_one_convention_passes() {
    let outcomes = search();
    assert_eq!(outcomes.len(), 4);
    let passing: Vec<_> = outcomes.iter().filter(|(_, r)| r.is_ok()).collect();
    assert_eq!(passing.len(), 1);
    let r = realization().unwrap();
    assert_eq!(r.convention.order, [1, 2, 3]);
    assert_eq!(r.convention.contraction_sign, 1);
}

#[test]
fn constraints_hold_exactly() {
    let r = realization().unwrap();
    assert!(c1_residual(r).is_zero());
    for chi in Chi::BOTH {
        assert!(c2_residual(r, chi).is_zero());
        assert!(c3_residual(r, chi).is_zero());
    }
}

#[test]
fn level_one_example_with_symbolic_kappa() {
    // W₋₁^{κω₁}(u) = (q − 2κ/3)⟨κω₁, u⟩: compare coefficient of ⟨e₁,∂Φ⟩ at κ = 5/4
    let k = gr(5, 4);
    let beta = CartanVector::omega1().scale(&k);
    let w = miura_w_form(1, &beta).unwrap();
    let q = Couplings::symbolic().q;
    let expect = FieldPolynomial::linear(&beta, 1).scale(&(q - k * gr(2, 3)));
    assert_eq!(w, expect);
}

#[test]
fn triple_pole_is_the_spin() {
    let r = realization().unwrap();
    let c = Couplings::symbolic();
    for a in [
        generic_alpha(),
        vec2(gr(-2, 1), gr(1, 5)),
        CartanVector::omega2().scale(&gr(7, 3)),
    ] {
        assert_eq!(r.triple_pole(&a), c.spin(&a));
    }
}

#[test]
fn level_one_relation_on_kappa_omega2() {
    // the mirror relation on κω₂ comes with the opposite sign
    let k = Poly::<GammaRational>::var();
    let cp = Couplings::symbolic().map(|x| Poly::constant(x.clone()));
    let beta = CartanVector::omega2().scale(&k);
    let r = realization().unwrap();
    let w1 = r.mode(1, &beta);
    let l1 = FieldPolynomial::linear(&beta, 1);
    let ratio = (cp.q.clone() - k.scale(&gr(2, 3))).scale(&gr(-1, 1));
    assert!(w1.checked_sub(&l1.scale(&ratio)).unwrap().is_zero());
}

#[test]
fn unsupported_mode_is_an_error() {
    assert_eq!(
        miura_w_form(4, &generic_alpha()).unwrap_err(),
        FormError::UnsupportedMode(4)
    );
}

#[test]
fn combine_examples() {
    let f = l_form(Partition::OneTwo, &generic_alpha());
    let one = GammaRational::int(1);
    assert!(
        combine(&[one.clone(), -one.clone()], &[f.clone(), f.clone()])
            .unwrap()
            .is_zero()
    );
    let z = FieldPolynomial::<GammaRational>::zero(3);
    assert!(combine(&[gr(7, 2)], &[z]).unwrap().is_zero());
    let g = l_form(Partition::Single(2), &generic_alpha());
    assert!(matches!(
        combine(&[one.clone(), one], &[f, g]),
        Err(FormError::MixedLevels { .. })
    ));
}

#[test]
fn json_round_trip_of_forms() {
    let f = miura_w_form(3, &generic_alpha()).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let back: FieldPolynomial = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert!(v[0]["factors"].is_array());
    assert!(v[0]["coeff"]["num"].is_array());
}

#[test]
fn weight_tags_validate() {
    let w = Weight::fully_degenerate(Chi::Gamma);
    assert!(w.validate().is_ok());
    let s = Weight::semi_degenerate(1, gr(1, 2)).unwrap();
    assert!(s.validate().is_ok());
    let bad = Weight {
        vector: generic_alpha(),
        tag: s.tag.clone(),
    };
    assert!(bad.validate().is_err());
}

#[test]
fn monomials_are_sorted() {
    let m = FieldMonomial::new(vec![(2, 1), (1, 2), (1, 1)]);
    assert_eq!(m.factors(), &[(1, 1), (1, 2), (2, 1)]);
    assert_eq!(m.level(), 4);
}

fn small() -> impl Strategy<Value = GammaRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| GammaRational::constant(q_frac(n, d)))
}

fn sym() -> impl Strategy<Value = GammaRational> {
    (small(), small()).prop_map(|(a, b)| a * GammaRational::gamma() + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_slots_are_additive(a in sym(), b in sym(), x1 in small(), x2 in small(), y1 in sym(), y2 in small()) {
        let x = vec2(x1, x2);
        let y = vec2(y1, y2);
        let mix = x.scale(&a) + y.scale(&b);
        // level-one form is linear
        let lhs = l_form(Partition::Single(1), &mix);
        let rhs = l_form(Partition::Single(1), &x).scale(&a).checked_add(&l_form(Partition::Single(1), &y).scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
        // the α-linear part of L₋ₙ: L₋ₙ^{x+y} − L₋ₙ^{y} = ⟨x, ∂ⁿΦ⟩/(n−1)!
        for n in 2..=4u32 {
            let d = l_form(Partition::Single(n), &(x.clone() + y.clone())).checked_sub(&l_form(Partition::Single(n), &y)).unwrap();
            let fact: i64 = (1..n as i64).product();
            prop_assert_eq!(d, FieldPolynomial::linear(&x, n).scale(&gr(1, fact)));
        }
    }

    #[test]
    fn serialized_forms_rebuild_structurally(a in sym(), b in small()) {
        let f = l_form(Partition::OneOneOne, &vec2(a, b));
        let s = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<FieldPolynomial>(&s).unwrap(), f);
    }
}
