//! The `p`-adic Gamma function `G_n(alpha) = (1-q^(alpha-n))/(1-q^-alpha)` and
//! the Riesz kernel `||x||^(alpha-n) / G_n(alpha)` paired against test functions.
//!
//! Throughout, `alpha` is the basis parameter.

use crate::delta::{pair_radial, DeltaFunction};
use crate::error::{Error, Result};
use crate::field::{int, Field};
use crate::powers::{dispatch, Exponent, IntoValue, PowerBasis, QSpec, Sample, Task, Value};

const VAR: &str = "alpha";

#[derive(Clone, Debug)]
pub struct GammaValue<K> {
    pub n: usize,
    pub value: K,
    /// `alpha` lies on the zero locus `n + (2 pi i / log q) Z`.
    pub zero: bool,
}

fn alpha_minus_n(n: usize) -> Exponent {
    Exponent::new(int(1), int(-(n as i64)))
}

pub fn gamma_n<B: PowerBasis>(basis: &B, n: usize) -> Result<GammaValue<B::K>> {
    gamma_n_at(basis, n, &Exponent::sigma())
}

/// `G_n` at an argument affine in the parameter.
pub fn gamma_n_at<B: PowerBasis>(basis: &B, n: usize, alpha: &Exponent) -> Result<GammaValue<B::K>> {
    let den = basis.one_minus(&alpha.neg())?;
    if den.vanishes() {
        return Err(Error::pole(format!(
            "{}: Gamma_n has its simple pole at alpha = 0",
            alpha.neg().factor_text(VAR)
        )));
    }
    let num = basis.one_minus(&alpha.plus(&int(-(n as i64))))?;
    let zero = num.vanishes();
    let value = num
        .div_ref(&den)
        .ok_or_else(|| Error::pole(alpha.neg().factor_text(VAR)))?;
    Ok(GammaValue { n, value, zero })
}

/// `<R_alpha, Phi>` by the three-term continuation: the Dirac part at the origin,
/// the unit-ball integral of `Phi - Phi(0)` and the exterior integral, each
/// summed exactly over shells.
pub fn riesz_pair<B: PowerBasis>(basis: &B, phi: &DeltaFunction) -> Result<B::K> {
    let n = phi.dim();
    let pref = basis.one_minus(&alpha_minus_n(n))?;
    if pref.vanishes() {
        return Err(Error::pole(alpha_minus_n(n).factor_text(VAR)));
    }
    let shell = basis.one_minus(&Exponent::constant(int(-(n as i64))))?;
    let mut inner = B::K::zero();
    for (l, c) in phi.terms() {
        // I(l) = sum over the shells between the unit sphere and level l.
        let ks: Box<dyn Iterator<Item = i64>> = if l > 0 {
            Box::new(0..l)
        } else {
            Box::new(l..0)
        };
        let mut sum = B::K::zero();
        for k in ks {
            sum = sum.add_ref(&basis.q_pow(&Exponent::param(int(-k)))?);
        }
        let i_l = if l > 0 { sum.neg_ref() } else { sum };
        inner = inner.add_ref(&basis.lift(c).mul_ref(&i_l));
    }
    let dirac = basis.lift(&phi.at_origin());
    let outer = basis.one_minus(&Exponent::param(int(-1)))?;
    let total = dirac.add_ref(&outer.mul_ref(&inner));
    total
        .mul_ref(&shell)
        .div_ref(&pref)
        .ok_or_else(|| Error::pole(alpha_minus_n(n).factor_text(VAR)))
}

/// `<||x||^(alpha-n)/G_n(alpha), F Phi> - <||x||^-alpha, Phi>`; zero when the
/// Fourier identity for Riesz kernels holds.
pub fn check_prop1<B: PowerBasis>(basis: &B, phi: &DeltaFunction) -> Result<B::K> {
    let n = phi.dim();
    let g = gamma_n(basis, n)?;
    if g.zero {
        return Err(Error::pole(format!(
            "kernel pole collision: Gamma_n vanishes, {}",
            alpha_minus_n(n).factor_text(VAR)
        )));
    }
    let lhs = pair_radial(basis, &alpha_minus_n(n), &phi.fourier(), true, VAR)?
        .div_ref(&g.value)
        .ok_or_else(|| Error::pole("Gamma_n"))?;
    let rhs = pair_radial(basis, &Exponent::param(int(-1)), phi, true, VAR)?;
    Ok(lhs.sub_ref(&rhs))
}

struct GammaTask(usize);
struct RieszTask<'a>(&'a DeltaFunction);
struct Prop1Task<'a>(&'a DeltaFunction);

impl Task for GammaTask {
    type Out = GammaValue<Value>;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Self::Out> {
        let g = gamma_n(b, self.0)?;
        Ok(GammaValue {
            n: g.n,
            value: g.value.to_value(),
            zero: g.zero,
        })
    }
}

impl Task for RieszTask<'_> {
    type Out = Value;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        Ok(riesz_pair(b, self.0)?.to_value())
    }
}

impl Task for Prop1Task<'_> {
    type Out = Value;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        Ok(check_prop1(b, self.0)?.to_value())
    }
}

/// [`gamma_n`] at a sampled `alpha`.
pub fn gamma_value(n: usize, q: QSpec, alpha: &Sample) -> Result<GammaValue<Value>> {
    dispatch(q, alpha, &GammaTask(n))
}

/// [`riesz_pair`] at a sampled `alpha`, with `q = p` of the test function.
pub fn riesz_value(phi: &DeltaFunction, alpha: &Sample) -> Result<Value> {
    dispatch(QSpec::Prime(phi.prime()), alpha, &RieszTask(phi))
}

/// [`check_prop1`] at a sampled `alpha`, with `q = p` of the test function.
pub fn prop1_residual(phi: &DeltaFunction, alpha: &Sample) -> Result<Value> {
    dispatch(QSpec::Prime(phi.prime()), alpha, &Prop1Task(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::numeric::BigComplex;
    use crate::powers::{Exact, FreeParam, FreeQ};

    #[test]
    fn gamma_special_values() {
        let g = gamma_value(2, QSpec::Free, &Sample::Rational(int(1))).unwrap();
        assert!(matches!(g.value, Value::Symbolic { ref text, .. } if text == "1"));
        let g = gamma_value(3, QSpec::Prime(5), &Sample::Rational(int(3))).unwrap();
        assert!(g.zero && g.value.is_zero());
        assert!(matches!(
            gamma_value(2, QSpec::Prime(3), &Sample::Rational(int(0))),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn gamma_reflection_symbolic() {
        let b = FreeParam { inner: FreeQ { sigma: int(0) } };
        let n = 3;
        let g = gamma_n(&b, n).unwrap().value;
        let reflected = Exponent::new(int(-1), int(n as i64));
        let h = gamma_n_at(&b, n, &reflected).unwrap().value;
        assert!(g.mul_ref(&h).is_one());
        for a in [rat(1, 3), rat(5, 2), rat(-7, 4), int(2)] {
            let e = Exact { q: 7, sigma: a.clone() };
            let r = Exact { q: 7, sigma: int(n as i64) - &a };
            let prod = gamma_n(&e, n).unwrap().value.mul_ref(&gamma_n(&r, n).unwrap().value);
            assert!(prod.is_one(), "alpha = {a}");
        }
    }

    #[test]
    fn riesz_on_unit_ball() {
        for a in [rat(1, 2), int(1), rat(-3, 2)] {
            let b = Exact { q: 3, sigma: a };
            let phi = DeltaFunction::ball(3, 2, 0);
            let v = riesz_pair(&b, &phi).unwrap();
            let expect = b
                .one_minus(&Exponent::constant(int(-2)))
                .unwrap()
                .div_ref(&b.one_minus(&alpha_minus_n(2)).unwrap())
                .unwrap();
            assert_eq!(v, expect);
        }
        let b = Exact { q: 3, sigma: int(0) };
        assert!(riesz_pair(&b, &DeltaFunction::ball(3, 2, 0)).unwrap().is_one());
        let phi = DeltaFunction::ball(3, 2, -1).sub(&DeltaFunction::ball(3, 2, 1));
        assert!(riesz_pair(&b, &phi).unwrap().is_zero());
    }

    #[test]
    fn riesz_matches_continued_pairing() {
        let b = FreeParam { inner: Exact { q: 5, sigma: int(0) } };
        for l in -3..=3 {
            let phi = DeltaFunction::ball(5, 2, l);
            let direct = riesz_pair(&b, &phi).unwrap();
            let g = gamma_n(&b, 2).unwrap().value;
            let via = pair_radial(&b, &alpha_minus_n(2), &phi, true, VAR)
                .unwrap()
                .div_ref(&g)
                .unwrap();
            assert_eq!(direct, via, "level {l}");
        }
    }

    #[test]
    fn prop1_examples() {
        let phi0 = DeltaFunction::ball(3, 2, 0);
        let r = prop1_residual(&phi0, &Sample::Symbolic).unwrap();
        assert!(r.is_zero());
        let phi1 = DeltaFunction::ball(3, 2, 1);
        assert!(prop1_residual(&phi1, &Sample::Rational(int(1))).unwrap().is_zero());
        assert!(matches!(
            prop1_residual(&phi0, &Sample::Rational(int(2))),
            Err(Error::Pole { .. })
        ));
        let z = BigComplex::from_f64(0.4, 1.3);
        let r = prop1_residual(&phi1, &Sample::Complex(z)).unwrap();
        assert!(r.abs_f64().unwrap() < 1e-60);
    }
}
