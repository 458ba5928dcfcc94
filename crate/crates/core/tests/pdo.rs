use num::BigRational;
use proptest::prelude::*;
use pzeta_core::delta::DeltaFunction;
use pzeta_core::error::Error;
use pzeta_core::field::int;
use pzeta_core::form::Form;
use pzeta_core::padic::PAdicVector;
use pzeta_core::pdo::{
    apply_operator, complex_samples, fundamental_solution, functional_equation_check, holomorphy_shift_check,
    lemma1_check, OperatorSpec, Real,
};
use pzeta_core::powers::Sample;

fn spec(t: &str, p: u64, beta: BigRational) -> OperatorSpec {
    OperatorSpec::for_form(Form::parse(t, 2, p).unwrap(), Real::Rational(beta)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pairing_factorizes_through_radial_kernel(
        a in -30i64..30, b in 1i64..5, t in proptest::sample::select(vec!["x1^2 + x2^2", "x1*x2", "x1^3 + x2^3"]),
        c in proptest::collection::vec((-3i64..=3, -5i64..=5), 1..4),
    ) {
        let s = spec(t, 7, int(1));
        let phi = DeltaFunction::from_terms(7, 2, c.into_iter().map(|(l, k)| (l, int(k))));
        let r = lemma1_check(&s, &phi, &[Sample::Rational(BigRational::new(a.into(), b.into()))]).unwrap();
        prop_assert!(r[0].passes(0.0), "{:?}", r[0]);
    }

    #[test]
    fn functional_equation_at_rational_points(
        a in -30i64..30, b in 1i64..5, l in -3i64..=3, t in proptest::sample::select(vec!["x1^2 + x2^2", "x1*x2"]),
    ) {
        let s = spec(t, 3, int(1));
        let r = functional_equation_check(&s, l, &[Sample::Rational(BigRational::new(a.into(), b.into()))]).unwrap();
        prop_assert!(r[0].passes(0.0), "{:?}", r[0]);
    }

    #[test]
    fn holomorphy_shift_for_admissible_beta(b in 1i64..7, l in 0i64..=2) {
        let beta = BigRational::new((2 * b + 1).into(), 4.into());
        let s = spec("x1*x2", 5, beta);
        prop_assert!(holomorphy_shift_check(&s, l).unwrap().is_zero());
    }
}

#[test]
fn functional_equation_off_the_real_line() {
    let s = spec("x1*x2", 3, int(1));
    for l in -1..=1 {
        let r = functional_equation_check(&s, l, &complex_samples(10)).unwrap();
        assert!(r.iter().all(|c| c.passes(1e-25)), "{r:?}");
    }
}

#[test]
fn inadmissible_operators_report_all_reasons() {
    match fundamental_solution(&spec("x1*x2", 3, int(1)), None) {
        Err(Error::Inadmissible(r)) => assert_eq!(r.len(), 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn operator_annihilates_zero() {
    let s = spec("x1^2 + x2^2", 3, int(1));
    let x = PAdicVector::from_ints(&[1, 1], 3).unwrap();
    let v = apply_operator(&s, &DeltaFunction::zero(3, 2), &x, 2).unwrap();
    assert!(v.value.abs_f64() == 0.0 && v.bound == 0.0);
}
