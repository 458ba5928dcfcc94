//! Rational functions of a free residue-field size `q`.

use std::fmt;

use num::{BigRational, Signed, ToPrimitive};

use crate::field::Field;
use crate::poly::{gcd_usize, lcm_usize};
use crate::radical::Radical;
use crate::ratfunc::RatFunc;

/// A rational function of `u = q^(1/root)` with rational coefficients.
#[derive(Clone, Debug)]
pub struct QFunc {
    root: usize,
    f: RatFunc<BigRational>,
}

impl QFunc {
    pub fn from_ratfunc(root: usize, f: RatFunc<BigRational>) -> Self {
        QFunc { root, f }.simplified()
    }

    /// `c * q^e` for rational `e`.
    pub fn q_pow(c: BigRational, e: &BigRational) -> Self {
        let root = e.denom().to_usize().expect("exponent denominator too large");
        let k = e.numer().to_i64().expect("exponent numerator too large");
        QFunc::from_ratfunc(root, RatFunc::monomial(c, k))
    }

    /// `q` itself.
    pub fn q() -> Self {
        QFunc::from_ratfunc(1, RatFunc::var())
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn ratfunc(&self) -> &RatFunc<BigRational> {
        &self.f
    }

    /// Specialises `q` to a prime; `None` at a pole.
    pub fn at_prime(&self, p: u64) -> Option<Radical> {
        let u = Radical::root_pow(p, 1, self.root);
        let lift = |c: &BigRational| Radical::rational(c.clone());
        let n = self.f.num().map(lift).eval(&u);
        let d = self.f.den().map(lift).eval(&u);
        n.div_ref(&d)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.f.den().degree() == Some(0) && self.f.num().degree().unwrap_or(0) == 0 {
            Some(self.f.num().coeff(0) / self.f.den().coeff(0))
        } else {
            None
        }
    }

    fn lift(&self, root: usize) -> RatFunc<BigRational> {
        let k = root / self.root;
        if k == 1 {
            return self.f.clone();
        }
        RatFunc::new(self.f.num().inflate(k), self.f.den().inflate(k)).expect("nonzero")
    }

    fn align(&self, o: &Self) -> (usize, RatFunc<BigRational>, RatFunc<BigRational>) {
        let root = lcm_usize(self.root, o.root);
        (root, self.lift(root), o.lift(root))
    }

    fn simplified(self) -> Self {
        let g = gcd_usize(
            self.root,
            gcd_usize(self.f.num().stride(), self.f.den().stride()),
        );
        let g = if self.f.num().is_zero() {
            self.root
        } else {
            g
        };
        if g <= 1 {
            return self;
        }
        let f = RatFunc::new(self.f.num().deflate(g), self.f.den().deflate(g)).expect("nonzero");
        QFunc {
            root: self.root / g,
            f,
        }
    }

    fn pow_label(&self, k: i64) -> String {
        let g = gcd_usize(k.unsigned_abs() as usize, self.root).max(1);
        let (n, d) = (k / g as i64, self.root / g);
        match (n, d) {
            (1, 1) => "q".into(),
            (_, 1) => format!("q^{n}"),
            _ => format!("q^({n}/{d})"),
        }
    }
}

impl PartialEq for QFunc {
    fn eq(&self, o: &Self) -> bool {
        let (_, a, b) = self.align(o);
        a == b
    }
}

impl fmt::Display for QFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.f.den();
        let dd = den.degree().unwrap_or(0);
        if den.coeffs()[..dd].iter().all(|c| c.is_zero()) {
            // Laurent polynomial: divide through by the monomial denominator.
            let num = self.f.num();
            if num.is_zero() {
                return f.write_str("0");
            }
            let mut out = String::new();
            for (i, c) in num.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let k = i as i64 - dd as i64;
                let mag = c.abs();
                let body = match (k, mag == BigRational::from_integer(1.into())) {
                    (0, _) => mag.to_string(),
                    (_, true) => self.pow_label(k),
                    _ => format!("{mag}*{}", self.pow_label(k)),
                };
                let neg = c.is_negative();
                match (out.is_empty(), neg) {
                    (true, true) => out.push_str(&format!("-{body}")),
                    (true, false) => out.push_str(&body),
                    (false, true) => out.push_str(&format!(" - {body}")),
                    (false, false) => out.push_str(&format!(" + {body}")),
                }
            }
            return f.write_str(&out);
        }
        f.write_str(&self.f.render(|k| self.pow_label(k as i64)))
    }
}

impl Field for QFunc {
    fn zero() -> Self {
        QFunc {
            root: 1,
            f: RatFunc::zero(),
        }
    }
    fn one() -> Self {
        QFunc {
            root: 1,
            f: RatFunc::one(),
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        QFunc {
            root: 1,
            f: RatFunc::constant(r.clone()),
        }
    }
    fn is_zero(&self) -> bool {
        self.f.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let (root, a, b) = self.align(o);
        QFunc::from_ratfunc(root, a.add_ref(&b))
    }
    fn sub_ref(&self, o: &Self) -> Self {
        let (root, a, b) = self.align(o);
        QFunc::from_ratfunc(root, a.sub_ref(&b))
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let (root, a, b) = self.align(o);
        QFunc::from_ratfunc(root, a.mul_ref(&b))
    }
    fn neg_ref(&self) -> Self {
        QFunc {
            root: self.root,
            f: self.f.neg_ref(),
        }
    }
    fn inv(&self) -> Option<Self> {
        Some(QFunc::from_ratfunc(self.root, self.f.inv()?))
    }
}
