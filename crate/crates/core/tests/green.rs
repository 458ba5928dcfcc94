use proptest::prelude::*;
use pzeta_core::field::{int, rat};
use pzeta_core::form::Form;
use pzeta_core::green::{green_pair_exact, paired_partial, GreenSpec};
use pzeta_core::pdo::{OperatorSpec, Real};

fn green(t: &str, lambda: num::BigRational) -> GreenSpec {
    let op = OperatorSpec::for_form(Form::parse(t, 2, 3).unwrap(), Real::Rational(int(1))).unwrap();
    GreenSpec::new(op, Real::Rational(lambda)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decreasing_in_lambda_increasing_in_level(a in 1i64..40, b in 1i64..8, l in 0i64..4) {
        let lam = rat(a, b);
        let g = green("x1^2 + x2^2", lam.clone());
        let h = green("x1^2 + x2^2", lam + rat(1, 3));
        let v = green_pair_exact(&g, l, 1e-40).unwrap().value.re_f64();
        prop_assert!(green_pair_exact(&h, l, 1e-40).unwrap().value.re_f64() < v);
        // Larger l shrinks q^(-l d beta) in the denominator.
        prop_assert!(green_pair_exact(&g, l + 1, 1e-40).unwrap().value.re_f64() > v);
    }

    #[test]
    fn exact_value_between_consecutive_partials(l in 1i64..5, m in 0u32..5) {
        let g = green("x1*x2", int(1));
        let v = green_pair_exact(&g, l, 1e-40).unwrap().value.re_f64();
        let p = |m| paired_partial(&g, l, m).unwrap().value.to_complex().unwrap().re_f64();
        let (a, b) = (p(m), p(m + 1));
        prop_assert!(a.min(b) <= v && v <= a.max(b), "{} not between {} and {}", v, a, b);
    }
}

#[test]
fn large_lambda_limit() {
    for lam in [1_000i64, 1_000_000] {
        let g = green("x1^2 + x2^2", int(lam));
        for l in 0..3 {
            let v = green_pair_exact(&g, l, 1e-40).unwrap().value.re_f64();
            assert!((v * lam as f64 - 1.0).abs() < 1.0 / lam as f64);
        }
    }
}
