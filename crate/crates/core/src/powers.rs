//! Powers of `q` with exponents affine in one free parameter, evaluated in
//! whichever scalar field the caller picks.
//!
//! Every closed form in this crate is built from terms `q^(k*sigma + c)` where
//! `sigma` is the operation's parameter (`s`, `alpha` or `beta`). A
//! [`PowerBasis`] fixes how `q` and `sigma` are realised:
//!
//! | basis        | `q`      | `sigma`   | scalars                    |
//! |--------------|----------|-----------|----------------------------|
//! | [`Exact`]    | prime    | rational  | [`Radical`], `Q(q^(1/D))`  |
//! | [`Numeric`]  | prime    | complex   | [`BigComplex`]             |
//! | [`FreeQ`]    | symbolic | rational  | [`QFunc`]                  |
//! | [`FreeParam`]| inner    | symbolic  | rational functions of `T = q^-sigma` |

use std::fmt;

use num::{BigRational, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{int, rational_to_f64, Field};
use crate::numeric::{BigComplex, VANISH_TOL};
use crate::qfunc::QFunc;
use crate::radical::Radical;
use crate::ratfunc::RatFunc;

/// `param * sigma + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub param: BigRational,
    pub shift: BigRational,
}

impl Exponent {
    pub fn new(param: BigRational, shift: BigRational) -> Self {
        Exponent { param, shift }
    }

    pub fn constant(c: BigRational) -> Self {
        Exponent::new(BigRational::zero(), c)
    }

    /// `k * sigma`
    pub fn param(k: BigRational) -> Self {
        Exponent::new(k, BigRational::zero())
    }

    pub fn sigma() -> Self {
        Exponent::param(int(1))
    }

    pub fn add(&self, o: &Self) -> Self {
        Exponent::new(&self.param + &o.param, &self.shift + &o.shift)
    }

    pub fn neg(&self) -> Self {
        Exponent::new(-&self.param, -&self.shift)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn plus(&self, c: &BigRational) -> Self {
        Exponent::new(self.param.clone(), &self.shift + c)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Exponent::new(&self.param * k, &self.shift * k)
    }

    pub fn is_constant(&self) -> bool {
        self.param.is_zero()
    }

    /// Renders as e.g. `-1-s` or `2*beta-3` for the given parameter name.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        if !self.shift.is_zero() || self.param.is_zero() {
            out.push_str(&self.shift.to_string());
        }
        if !self.param.is_zero() {
            let mag = self.param.abs();
            let body = if mag == int(1) {
                var.to_string()
            } else {
                format!("{mag}*{var}")
            };
            match (out.is_empty(), self.param.is_negative()) {
                (true, true) => out = format!("-{body}"),
                (true, false) => out = body,
                (false, true) => out = format!("{out}-{body}"),
                (false, false) => out = format!("{out}+{body}"),
            }
        }
        out
    }

    /// `1 - q^(self)` as display text.
    pub fn factor_text(&self, var: &str) -> String {
        format!("1 - q^({})", self.render(var))
    }
}

/// A scalar realised by some basis, ready for reporting.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(Radical),
    Numeric(BigComplex),
    Symbolic { text: String, zero: bool },
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Numeric(z) => z.abs_f64() < VANISH_TOL,
            Value::Symbolic { zero, .. } => *zero,
        }
    }

    /// Magnitude as `f64` (`None` for symbolic values).
    pub fn abs_f64(&self) -> Option<f64> {
        match self {
            Value::Exact(r) => Some(r.to_f64().abs()),
            Value::Numeric(z) => Some(z.abs_f64()),
            Value::Symbolic { zero, .. } => zero.then_some(0.0),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Value::Numeric(_))
    }

    pub fn to_complex(&self) -> Option<BigComplex> {
        match self {
            Value::Exact(r) => Some(BigComplex::from_radical(r)),
            Value::Numeric(z) => Some(z.clone()),
            Value::Symbolic { .. } => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Numeric(z) => write!(f, "{z}"),
            Value::Symbolic { text, .. } => f.write_str(text),
        }
    }
}

pub trait IntoValue {
    fn to_value(&self) -> Value;
}

impl IntoValue for Radical {
    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }
}

impl IntoValue for BigComplex {
    fn to_value(&self) -> Value {
        Value::Numeric(self.clone())
    }
}

impl IntoValue for QFunc {
    fn to_value(&self) -> Value {
        Value::Symbolic {
            text: self.to_string(),
            zero: self.is_zero(),
        }
    }
}

impl<K: Field> IntoValue for RatFunc<K> {
    fn to_value(&self) -> Value {
        Value::Symbolic {
            text: self.to_string(),
            zero: self.is_zero(),
        }
    }
}

pub trait PowerBasis {
    type K: Field + IntoValue;

    /// `q^e` with the basis' value of the parameter substituted.
    fn q_pow(&self, e: &Exponent) -> Result<Self::K>;

    /// Realises a coefficient that is a rational function of `q`.
    fn q_fn(&self, f: &QFunc) -> Result<Self::K>;

    /// The concrete residue-field size, if any.
    fn prime(&self) -> Option<u64>;

    /// Real part of the exponent's value, when the parameter is concrete.
    fn real_part(&self, e: &Exponent) -> Option<f64>;

    fn lift(&self, r: &BigRational) -> Self::K {
        Self::K::from_rational(r)
    }

    /// `1 - q^e`
    fn one_minus(&self, e: &Exponent) -> Result<Self::K> {
        Ok(Self::K::one().sub_ref(&self.q_pow(e)?))
    }
}

/// Prime `q`, rational parameter.
#[derive(Clone, Debug)]
pub struct Exact {
    pub q: u64,
    pub sigma: BigRational,
}

impl PowerBasis for Exact {
    type K = Radical;

    fn q_pow(&self, e: &Exponent) -> Result<Radical> {
        let v = &e.param * &self.sigma + &e.shift;
        let root = v.denom().to_usize().filter(|&d| d <= 1 << 16);
        let k = v.numer().to_i64().filter(|k| k.abs() <= 1 << 20);
        match (root, k) {
            (Some(_), Some(_)) => Ok(Radical::pow_rational(self.q, &v)),
            _ => Err(Error::Unsupported(format!("exponent {v} too large for exact arithmetic"))),
        }
    }

    fn q_fn(&self, f: &QFunc) -> Result<Radical> {
        f.at_prime(self.q)
            .ok_or_else(|| Error::pole(format!("coefficient {f} at q={}", self.q)))
    }

    fn prime(&self) -> Option<u64> {
        Some(self.q)
    }

    fn real_part(&self, e: &Exponent) -> Option<f64> {
        Some(rational_to_f64(&(&e.param * &self.sigma + &e.shift)))
    }
}

/// Prime `q`, complex parameter.
#[derive(Clone, Debug)]
pub struct Numeric {
    pub q: u64,
    pub sigma: BigComplex,
}

impl PowerBasis for Numeric {
    type K = BigComplex;

    fn q_pow(&self, e: &Exponent) -> Result<BigComplex> {
        let z = self
            .sigma
            .mul_ref(&BigComplex::from_rational(&e.param))
            .add_ref(&BigComplex::from_rational(&e.shift));
        Ok(BigComplex::q_pow(self.q, &z))
    }

    fn q_fn(&self, f: &QFunc) -> Result<BigComplex> {
        f.at_prime(self.q)
            .map(|r| BigComplex::from_radical(&r))
            .ok_or_else(|| Error::pole(format!("coefficient {f} at q={}", self.q)))
    }

    fn prime(&self) -> Option<u64> {
        Some(self.q)
    }

    fn real_part(&self, e: &Exponent) -> Option<f64> {
        Some(self.sigma.re_f64() * rational_to_f64(&e.param) + rational_to_f64(&e.shift))
    }
}

/// Symbolic `q`, rational parameter.
#[derive(Clone, Debug)]
pub struct FreeQ {
    pub sigma: BigRational,
}

impl PowerBasis for FreeQ {
    type K = QFunc;

    fn q_pow(&self, e: &Exponent) -> Result<QFunc> {
        Ok(QFunc::q_pow(int(1), &(&e.param * &self.sigma + &e.shift)))
    }

    fn q_fn(&self, f: &QFunc) -> Result<QFunc> {
        Ok(f.clone())
    }

    fn prime(&self) -> Option<u64> {
        None
    }

    // Convergence of q-geometric sums depends only on the exponent's sign since q > 1.
    fn real_part(&self, e: &Exponent) -> Option<f64> {
        Some(rational_to_f64(&(&e.param * &self.sigma + &e.shift)))
    }
}

/// Symbolic parameter over an inner basis: scalars are rational functions of `T = q^-sigma`.
#[derive(Clone, Debug)]
pub struct FreeParam<B> {
    pub inner: B,
}

impl<B: PowerBasis> PowerBasis for FreeParam<B> {
    type K = RatFunc<B::K>;

    fn q_pow(&self, e: &Exponent) -> Result<Self::K> {
        if !e.param.is_integer() {
            return Err(Error::Unsupported(format!(
                "symbolic evaluation needs an integer multiple of the parameter, got {}",
                e.param
            )));
        }
        let k = e.param.to_integer().to_i64().ok_or_else(|| Error::invalid("exponent too large"))?;
        let c = self.inner.q_pow(&Exponent::constant(e.shift.clone()))?;
        Ok(RatFunc::monomial(c, -k))
    }

    fn q_fn(&self, f: &QFunc) -> Result<Self::K> {
        Ok(RatFunc::constant(self.inner.q_fn(f)?))
    }

    fn prime(&self) -> Option<u64> {
        self.inner.prime()
    }

    fn real_part(&self, e: &Exponent) -> Option<f64> {
        if e.is_constant() {
            self.inner.real_part(e)
        } else {
            None
        }
    }
}

/// How the parameter of an operation is sampled.
#[derive(Clone, Debug)]
pub enum Sample {
    Rational(BigRational),
    Complex(BigComplex),
    Symbolic,
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sample::Rational(r) => write!(f, "{r}"),
            Sample::Complex(z) => write!(f, "{}", z.render(12)),
            Sample::Symbolic => f.write_str("symbolic"),
        }
    }
}

/// Residue-field size: a concrete prime or a free symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QSpec {
    Prime(u64),
    Free,
}

impl fmt::Display for QSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSpec::Prime(p) => write!(f, "{p}"),
            QSpec::Free => f.write_str("q"),
        }
    }
}

/// A computation generic over the basis, run by [`dispatch`].
pub trait Task {
    type Out;
    fn run<B: PowerBasis>(&self, basis: &B) -> Result<Self::Out>;
}

/// Picks the basis matching `(q, sample)` and runs the task in it.
pub fn dispatch<T: Task>(q: QSpec, sample: &Sample, task: &T) -> Result<T::Out> {
    match (q, sample) {
        (QSpec::Prime(q), Sample::Rational(r)) => task.run(&Exact {
            q,
            sigma: r.clone(),
        }),
        (QSpec::Prime(q), Sample::Complex(z)) => task.run(&Numeric {
            q,
            sigma: z.clone(),
        }),
        (QSpec::Prime(q), Sample::Symbolic) => task.run(&FreeParam {
            inner: Exact {
                q,
                sigma: BigRational::zero(),
            },
        }),
        (QSpec::Free, Sample::Rational(r)) => task.run(&FreeQ { sigma: r.clone() }),
        (QSpec::Free, Sample::Symbolic) => task.run(&FreeParam {
            inner: FreeQ {
                sigma: BigRational::zero(),
            },
        }),
        (QSpec::Free, Sample::Complex(_)) => Err(Error::Unsupported(
            "complex parameters need a concrete prime q".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn exponent_rendering() {
        let e = Exponent::new(int(-1), int(-1));
        assert_eq!(e.render("s"), "-1-s");
        assert_eq!(Exponent::new(int(2), int(-3)).render("beta"), "-3+2*beta");
        assert_eq!(Exponent::constant(int(0)).render("s"), "0");
    }

    #[test]
    fn exact_basis_handles_fractional_exponents() {
        let b = Exact {
            q: 3,
            sigma: rat(1, 2),
        };
        let v = b.q_pow(&Exponent::new(int(2), int(-1))).unwrap();
        assert!(v.is_one());
        let h = b.q_pow(&Exponent::sigma()).unwrap();
        assert_eq!(h.mul_ref(&h), Radical::rational(int(3)));
    }

    #[test]
    fn free_param_uses_inverse_variable() {
        let b = FreeParam {
            inner: Exact {
                q: 3,
                sigma: int(0),
            },
        };
        let v = b.q_pow(&Exponent::new(int(-1), int(-1))).unwrap();
        let at = v.eval(&Radical::rational(rat(1, 3))).unwrap();
        assert_eq!(at, Radical::rational(rat(1, 9)));
        assert!(b.q_pow(&Exponent::param(rat(1, 2))).is_err());
    }
}
