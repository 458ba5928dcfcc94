//! Finite-precision elements of `Q_p` and `Q_p^n`, coset enumeration of
//! `Z_p^n`, and the standard additive character.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::BigComplex;

/// Default number of `p`-adic digits carried by a [`PAdicScalar`].
pub const DEFAULT_PRECISION: u32 = 12;

/// Default cap on the number of points any enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "PZETA_BUDGET";

/// The enumeration budget, honouring `PZETA_BUDGET` when it parses.
pub fn budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v >= 1.0)
        .map(|v| v as u128)
        .unwrap_or(DEFAULT_BUDGET)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

/// `p^e` as an exact count, or `None` on overflow.
pub fn checked_pow(p: u64, e: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p as u128)?;
    }
    Some(acc)
}

/// Fails with a resource error when `p^e` points exceed `budget`.
pub fn check_budget(p: u64, e: u64, budget: u128) -> Result<u128> {
    match checked_pow(p, e) {
        Some(v) if v <= budget => Ok(v),
        Some(v) => Err(Error::Budget {
            required: v.to_string(),
            budget,
        }),
        None => Err(Error::Budget {
            required: format!("{p}^{e}"),
            budget,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("+inf"),
        }
    }
}

fn int_valuation(x: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return (v, y);
        }
        y = q;
        v += 1;
    }
}

/// `v_p(x)`; `+inf` for zero.
pub fn valuation(x: &BigRational, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let pb = BigInt::from(p);
    let (a, _) = int_valuation(x.numer(), &pb);
    let (b, _) = int_valuation(x.denom(), &pb);
    Ok(Valuation::Finite(a - b))
}

/// `x * p^-v(x)` reduced mod `p^m`.
pub fn angular_component(x: &BigRational, p: u64, m: u32) -> Result<BigInt> {
    require_prime(p)?;
    if x.is_zero() {
        return Err(Error::Undefined("angular component of 0".into()));
    }
    let pb = BigInt::from(p);
    let (_, a) = int_valuation(x.numer(), &pb);
    let (_, b) = int_valuation(x.denom(), &pb);
    let modulus = pb.pow(m);
    let binv = mod_inverse(&b, &modulus).expect("unit denominator");
    Ok((a * binv).mod_floor(&modulus))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// The `p`-adic fractional part `{x}_p` in `[0, 1)`.
pub fn fractional_part(x: &BigRational, p: u64) -> Result<BigRational> {
    require_prime(p)?;
    let pb = BigInt::from(p);
    let (k, rest) = int_valuation(x.denom(), &pb);
    if !rest.is_one() {
        return Err(Error::invalid(format!(
            "denominator of {x} is not a power of {p}"
        )));
    }
    let pk = pb.pow(k as u32);
    Ok(BigRational::new(x.numer().mod_floor(&pk), pk))
}

/// `Psi(x) = exp(2 pi i {x}_p)`.
pub fn additive_character(x: &BigRational, p: u64) -> Result<BigComplex> {
    let f = fractional_part(x, p)?;
    let (a, b) = (
        f.numer().to_u64().ok_or_else(|| Error::Unsupported("character modulus too large".into()))?,
        f.denom().to_u64().ok_or_else(|| Error::Unsupported("character modulus too large".into()))?,
    );
    Ok(BigComplex::root_of_unity(a, b))
}

/// `u * p^v` with `u` a unit known modulo `p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicScalar {
    p: u64,
    v: Valuation,
    unit: BigInt,
    m: u32,
}

impl PAdicScalar {
    pub fn zero(p: u64, m: u32) -> Self {
        PAdicScalar {
            p,
            v: Valuation::Infinity,
            unit: BigInt::zero(),
            m,
        }
    }

    pub fn from_rational(x: &BigRational, p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("precision must be positive"));
        }
        match valuation(x, p)? {
            Valuation::Infinity => Ok(Self::zero(p, m)),
            v => Ok(PAdicScalar {
                p,
                v,
                unit: angular_component(x, p, m)?,
                m,
            }),
        }
    }

    pub fn from_int(x: i64, p: u64) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(x.into()), p, DEFAULT_PRECISION)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> Valuation {
        self.v
    }

    /// Number of trusted unit digits.
    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.v == Valuation::Infinity
    }

    /// `|x|_p = p^-v` (0 for zero).
    pub fn norm(&self) -> BigRational {
        match self.v {
            Valuation::Infinity => BigRational::zero(),
            Valuation::Finite(v) => crate::field::rat_pow(self.p, -v),
        }
    }

    /// `ac x` mod `p^m`.
    pub fn angular_component(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::Undefined("angular component of 0".into()));
        }
        Ok(self.unit.clone())
    }

    /// The rational `u * p^v` for the stored representative `u`.
    pub fn to_rational(&self) -> BigRational {
        match self.v {
            Valuation::Infinity => BigRational::zero(),
            Valuation::Finite(v) => {
                BigRational::from_integer(self.unit.clone()) * crate::field::rat_pow(self.p, v)
            }
        }
    }

    fn absolute_precision(&self) -> Option<i64> {
        self.v.finite().map(|v| v + self.m as i64)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::invalid("mixing different primes"));
        }
        let (v1, v2) = match (self.v.finite(), o.v.finite()) {
            (None, _) => return Ok(o.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        let v0 = v1.min(v2);
        let abs = self
            .absolute_precision()
            .unwrap()
            .min(o.absolute_precision().unwrap());
        let pb = BigInt::from(self.p);
        let span = (abs - v0) as u32;
        let modulus = pb.pow(span);
        let s = (&self.unit * pb.pow((v1 - v0) as u32) + &o.unit * pb.pow((v2 - v0) as u32))
            .mod_floor(&modulus);
        if s.is_zero() {
            return Err(Error::Precision(format!(
                "sum cancels all {span} trusted digits"
            )));
        }
        let (k, u) = int_valuation(&s, &pb);
        let m = span - k as u32;
        Ok(PAdicScalar {
            p: self.p,
            v: Valuation::Finite(v0 + k),
            unit: u.mod_floor(&pb.pow(m)),
            m,
        })
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = BigInt::from(self.p).pow(self.m);
        PAdicScalar {
            unit: (-&self.unit).mod_floor(&modulus),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::invalid("mixing different primes"));
        }
        match (self.v.finite(), o.v.finite()) {
            (Some(a), Some(b)) => {
                let m = self.m.min(o.m);
                let modulus = BigInt::from(self.p).pow(m);
                Ok(PAdicScalar {
                    p: self.p,
                    v: Valuation::Finite(a + b),
                    unit: (&self.unit * &o.unit).mod_floor(&modulus),
                    m,
                })
            }
            _ => Ok(Self::zero(self.p, self.m.min(o.m))),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self
            .v
            .finite()
            .ok_or_else(|| Error::Undefined("inverse of 0".into()))?;
        let modulus = BigInt::from(self.p).pow(self.m);
        Ok(PAdicScalar {
            p: self.p,
            v: Valuation::Finite(-v),
            unit: mod_inverse(&self.unit, &modulus).expect("unit"),
            m: self.m,
        })
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.v {
            Valuation::Infinity => f.write_str("0"),
            Valuation::Finite(v) => write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, v, self.p, v + self.m as i64),
        }
    }
}

/// A point of `Q_p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicVector {
    comps: Vec<PAdicScalar>,
}

impl PAdicVector {
    pub fn new(comps: Vec<PAdicScalar>) -> Result<Self> {
        let Some(first) = comps.first() else {
            return Err(Error::invalid("empty vector"));
        };
        if comps.iter().any(|c| c.p != first.p) {
            return Err(Error::invalid("components over different primes"));
        }
        Ok(PAdicVector { comps })
    }

    pub fn from_rationals(xs: &[BigRational], p: u64, m: u32) -> Result<Self> {
        Self::new(
            xs.iter()
                .map(|x| PAdicScalar::from_rational(x, p, m))
                .collect::<Result<_>>()?,
        )
    }

    pub fn from_ints(xs: &[i64], p: u64) -> Result<Self> {
        let r: Vec<BigRational> = xs.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::from_rationals(&r, p, DEFAULT_PRECISION)
    }

    pub fn prime(&self) -> u64 {
        self.comps[0].p
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[PAdicScalar] {
        &self.comps
    }

    /// `min_i v(x_i)`, i.e. `-log_p ||x||`.
    pub fn min_valuation(&self) -> Valuation {
        self.comps.iter().map(|c| c.v).min().unwrap_or(Valuation::Infinity)
    }

    /// `||x|| = max_i |x_i|`.
    pub fn norm(&self) -> BigRational {
        match self.min_valuation() {
            Valuation::Infinity => BigRational::zero(),
            Valuation::Finite(v) => crate::field::rat_pow(self.prime(), -v),
        }
    }
}

/// A coset of `(p^m Z_p)^n` in `Z_p^n`, named by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetId {
    pub p: u64,
    pub depth: u32,
    pub rep: Vec<u64>,
}

impl CosetId {
    pub fn dim(&self) -> usize {
        self.rep.len()
    }
}

/// Iterator over all cosets in odometer order (last coordinate fastest).
#[derive(Debug)]
pub struct Cosets {
    p: u64,
    depth: u32,
    modulus: u64,
    next: Option<Vec<u64>>,
}

impl Iterator for Cosets {
    type Item = CosetId;

    fn next(&mut self) -> Option<CosetId> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        self.next = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.modulus {
                break Some(succ);
            }
            succ[i] = 0;
        };
        Some(CosetId {
            p: self.p,
            depth: self.depth,
            rep: cur,
        })
    }
}

/// All `p^(mn)` cosets of `(p^m Z_p)^n`, within the global budget.
pub fn enumerate_cosets(n: usize, m: u32, p: u64) -> Result<Cosets> {
    enumerate_cosets_with_budget(n, m, p, budget())
}

pub fn enumerate_cosets_with_budget(n: usize, m: u32, p: u64, budget: u128) -> Result<Cosets> {
    require_prime(p)?;
    if m == 0 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    check_budget(p, m as u64 * n as u64, budget)?;
    let modulus = checked_pow(p, m as u64)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Error::Unsupported("modulus exceeds 64 bits".into()))?;
    Ok(Cosets {
        p,
        depth: m,
        modulus,
        next: Some(vec![0; n]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::field::Field as _;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(45, 7), 3).unwrap(), Valuation::Finite(2));
        assert_eq!(valuation(&int(0), 5).unwrap(), Valuation::Infinity);
        assert_eq!(valuation(&rat(1, 9), 3).unwrap(), Valuation::Finite(-2));
        assert!(valuation(&int(4), 4).is_err());
    }

    #[test]
    fn angular_components() {
        assert_eq!(angular_component(&int(45), 3, 1).unwrap(), BigInt::from(2));
        assert_eq!(angular_component(&int(45), 3, 2).unwrap(), BigInt::from(5));
        assert_eq!(angular_component(&rat(1, 3), 3, 1).unwrap(), BigInt::from(1));
        assert!(matches!(angular_component(&int(0), 3, 1), Err(Error::Undefined(_))));
    }

    #[test]
    fn characters() {
        let w = additive_character(&rat(1, 3), 3).unwrap();
        assert!(w.sub_ref(&BigComplex::root_of_unity(1, 3)).abs_f64() < 1e-70);
        let one = additive_character(&int(2), 7).unwrap();
        assert!(one.sub_ref(&BigComplex::one()).abs_f64() < 1e-70);
        let z = additive_character(&rat(10, 9), 3).unwrap();
        assert!(z.sub_ref(&BigComplex::root_of_unity(1, 9)).abs_f64() < 1e-70);
        assert!(additive_character(&rat(1, 6), 3).is_err());
    }

    #[test]
    fn coset_counts() {
        assert_eq!(enumerate_cosets(2, 1, 3).unwrap().count(), 9);
        let v: Vec<u64> = enumerate_cosets(1, 3, 2).unwrap().map(|c| c.rep[0]).collect();
        assert_eq!(v, (0..8).collect::<Vec<_>>());
        assert_eq!(enumerate_cosets(3, 2, 5).unwrap().count(), 15625);
    }

    #[test]
    fn budget_is_enforced() {
        match enumerate_cosets_with_budget(4, 4, 5, 1000) {
            Err(Error::Budget { required, budget }) => {
                assert_eq!(required, "152587890625");
                assert_eq!(budget, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn scalar_arithmetic_tracks_precision() {
        let a = PAdicScalar::from_rational(&int(1), 3, 4).unwrap();
        let b = PAdicScalar::from_rational(&int(-1), 3, 4).unwrap();
        assert!(matches!(a.add(&b), Err(Error::Precision(_))));
        let c = PAdicScalar::from_rational(&int(8), 3, 4).unwrap();
        let s = a.add(&c).unwrap();
        assert_eq!(s.valuation(), Valuation::Finite(2));
        assert_eq!(s.precision(), 2);
        let t = c.mul(&c.inv().unwrap()).unwrap();
        assert_eq!(t.to_rational(), int(1));
    }

    #[test]
    fn vector_norm() {
        let x = PAdicVector::from_rationals(&[rat(1, 3), int(9)], 3, 6).unwrap();
        assert_eq!(x.norm(), int(3));
        assert_eq!(x.min_valuation(), Valuation::Finite(-1));
    }
}
