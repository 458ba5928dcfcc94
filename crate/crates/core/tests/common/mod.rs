#![allow(dead_code)]

use num::BigInt;
use proptest::prelude::*;
use pzeta_core::form::Form;

/// Exponent vectors of all monomials of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|a| {
            monomials(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// Homogeneous forms with small integer coefficients.
pub fn arb_form(max_n: usize, max_d: u32, primes: &'static [u64]) -> impl Strategy<Value = Form> {
    (2..=max_n, 2..=max_d, proptest::sample::select(primes))
        .prop_flat_map(|(n, d, p)| {
            let mons = monomials(n, d);
            let k = mons.len();
            (Just((n, p, mons)), proptest::collection::vec(-3i64..=3, k))
        })
        .prop_filter_map("zero form", |((n, p, mons), coeffs)| {
            let terms: Vec<_> = mons
                .into_iter()
                .zip(coeffs)
                .filter(|(_, c)| *c != 0)
                .map(|(m, c)| (m, BigInt::from(c)))
                .collect();
            Form::from_terms(n, p, terms).ok()
        })
}
