//! Univariate rational functions in lowest terms.

use std::fmt;

use num::BigRational;

use crate::field::Field;
use crate::poly::Poly;

/// `num / den`, reduced, with a monic denominator.
#[derive(Clone, Debug)]
pub struct RatFunc<K: Field> {
    num: Poly<K>,
    den: Poly<K>,
    var: &'static str,
}

impl<K: Field> RatFunc<K> {
    /// Builds and reduces `num/den`; `None` if `den` is zero.
    pub fn new(num: Poly<K>, den: Poly<K>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let (n, mut d) = if g.degree().unwrap_or(0) == 0 {
            (num, den)
        } else {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        };
        if n.is_zero() {
            d = Poly::one();
        }
        let l = d.lead()?.inv()?;
        Some(RatFunc {
            num: n.scale(&l),
            den: d.scale(&l),
            var: "T",
        })
    }

    pub fn poly(p: Poly<K>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
            var: "T",
        }
    }

    pub fn constant(c: K) -> Self {
        Self::poly(Poly::constant(c))
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::poly(Poly::monomial(K::one(), 1))
    }

    /// `c * x^k` for any integer `k`.
    pub fn monomial(c: K, k: i64) -> Self {
        if k >= 0 {
            Self::poly(Poly::monomial(c, k as usize))
        } else {
            Self::new(Poly::constant(c), Poly::monomial(K::one(), k.unsigned_abs() as usize))
                .expect("nonzero denominator")
        }
    }

    pub fn with_var(mut self, var: &'static str) -> Self {
        self.var = var;
        self
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        let d = self.den.eval(x);
        if d.vanishes() {
            return None;
        }
        self.num.eval(x).div_ref(&d)
    }

    /// Substitutes `x -> c*x`.
    pub fn scale_var(&self, c: &K) -> Option<Self> {
        Self::new(self.num.scale_var(c), self.den.scale_var(c))
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Option<RatFunc<L>> {
        RatFunc::new(self.num.map(&f), self.den.map(&f)).map(|r| r.with_var(self.var))
    }

    pub fn render(&self, pow: impl Fn(usize) -> String + Copy) -> String {
        let n = self.num.render(pow);
        if self.den.degree() == Some(0) {
            return n;
        }
        let d = self.den.render(pow);
        let wrap = |s: String, always: bool| {
            if always || s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, false), wrap(d, true))
    }
}

impl<K: Field> PartialEq for RatFunc<K> {
    fn eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den
    }
}

impl<K: Field> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var;
        f.write_str(&self.render(|k| if k == 1 { v.to_string() } else { format!("{v}^{k}") }))
    }
}

impl<K: Field> Field for RatFunc<K> {
    fn zero() -> Self {
        Self::poly(Poly::zero())
    }
    fn one() -> Self {
        Self::poly(Poly::one())
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::constant(K::from_rational(r))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone())
                .expect("nonzero")
                .with_var(self.var);
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
        .with_var(self.var)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
            .expect("nonzero")
            .with_var(self.var)
    }
    fn neg_ref(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
            var: self.var,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Self::new(self.den.clone(), self.num.clone()).map(|r| r.with_var(self.var))
    }
}
