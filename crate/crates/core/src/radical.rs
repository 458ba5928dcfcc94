//! Exact arithmetic in the radical extension `Q(p^(1/D))`.

use std::fmt;

use num::{BigRational, Signed};

use crate::field::{rat_pow, Field};
use crate::poly::{lcm_usize, Poly};

/// `sum_i c_i * p^(i/D)` for `0 <= i < D`.
///
/// `x^D - p` is Eisenstein at `p`, so the representation is unique and every
/// nonzero element is invertible. Elements over different `D` are aligned to
/// the least common multiple before combining. `p = 0` marks a plain rational.
#[derive(Clone, Debug)]
pub struct Radical {
    p: u64,
    root: usize,
    c: Vec<BigRational>,
}

impl Radical {
    pub fn rational(r: BigRational) -> Self {
        Radical {
            p: 0,
            root: 1,
            c: vec![r],
        }
    }

    /// `p^(k/D)` for an integer `k` of any sign.
    pub fn root_pow(p: u64, k: i64, root: usize) -> Self {
        assert!(root >= 1);
        let d = root as i64;
        let whole = k.div_euclid(d);
        let frac = k.rem_euclid(d) as usize;
        let mut c = vec![BigRational::zero(); root];
        c[frac] = rat_pow(p, whole);
        Radical { p, root, c }.simplified()
    }

    /// `p^e` for a rational exponent.
    pub fn pow_rational(p: u64, e: &BigRational) -> Self {
        use num::ToPrimitive;
        let root = e.denom().to_usize().expect("exponent denominator too large");
        let k = e.numer().to_i64().expect("exponent numerator too large");
        Self::root_pow(p, k, root)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|c| c.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p as f64;
        self.c
            .iter()
            .enumerate()
            .map(|(i, c)| crate::field::rational_to_f64(c) * p.powf(i as f64 / self.root as f64))
            .sum()
    }

    /// Sign of the (real) element; `None` for zero.
    pub fn signum(&self) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(if r.is_positive() { 1 } else { -1 });
        }
        let v = self.to_f64();
        if v.abs() > 1e-9 {
            return Some(if v > 0.0 { 1 } else { -1 });
        }
        // Nonzero but tiny: redo in 256-bit arithmetic.
        let hp = crate::numeric::BigComplex::from_radical(self);
        Some(if hp.re_f64() > 0.0 { 1 } else { -1 })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    fn lift(&self, root: usize, p: u64) -> Self {
        if root == self.root {
            return Radical {
                p: if self.p == 0 { p } else { self.p },
                root,
                c: self.c.clone(),
            };
        }
        let k = root / self.root;
        let mut c = vec![BigRational::zero(); root];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Radical {
            p: if self.p == 0 { p } else { self.p },
            root,
            c,
        }
    }

    fn align(&self, o: &Self) -> (Self, Self) {
        let p = match (self.p, o.p) {
            (0, q) | (q, 0) => q,
            (a, b) => {
                assert_eq!(a, b, "mixing radicals over different primes");
                a
            }
        };
        let root = lcm_usize(self.root, o.root);
        (self.lift(root, p), o.lift(root, p))
    }

    /// Reduces to the smallest root that still represents the element.
    fn simplified(mut self) -> Self {
        if self.p == 0 {
            return self;
        }
        let mut g = self.root;
        for (i, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                g = crate::poly::gcd_usize(g, i);
            }
        }
        if g == 0 {
            g = self.root;
        }
        if g > 1 {
            self.c = self.c.iter().step_by(g).cloned().collect();
            self.root /= g;
        }
        self
    }

    fn modulus(&self) -> Poly<BigRational> {
        let mut v = vec![BigRational::zero(); self.root + 1];
        v[0] = -BigRational::from_integer(self.p.into());
        v[self.root] = BigRational::from_integer(1.into());
        Poly::new(v)
    }

    fn from_poly(p: u64, root: usize, poly: &Poly<BigRational>) -> Self {
        let mut c = vec![BigRational::zero(); root];
        let pr = BigRational::from_integer(p.into());
        for (i, a) in poly.coeffs().iter().enumerate() {
            let wraps = (i / root) as u32;
            let mut term = a.clone();
            for _ in 0..wraps {
                term *= &pr;
            }
            c[i % root] += term;
        }
        Radical { p, root, c }.simplified()
    }
}

impl PartialEq for Radical {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.align(o);
        a.c == b.c
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            let body = if i == 0 {
                mag.to_string()
            } else {
                let g = crate::poly::gcd_usize(i, self.root);
                let (num, den) = (i / g, self.root / g);
                let r = if num == 1 {
                    format!("{}^(1/{den})", self.p)
                } else {
                    format!("{}^({num}/{den})", self.p)
                };
                if mag == BigRational::from_integer(1.into()) {
                    r
                } else {
                    format!("{mag}*{r}")
                }
            };
            parts.push((neg, body));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (k, (neg, body)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Field for Radical {
    fn zero() -> Self {
        Radical::rational(BigRational::zero())
    }
    fn one() -> Self {
        Radical::rational(BigRational::from_integer(1.into()))
    }
    fn from_rational(r: &BigRational) -> Self {
        Radical::rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }
    fn add_ref(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        Radical { c, ..a }.simplified()
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.root == 1 && o.root == 1 {
            let (a, _) = self.align(o);
            return Radical {
                c: vec![&self.c[0] * &o.c[0]],
                ..a
            };
        }
        let (a, b) = self.align(o);
        let pa = Poly::new(a.c.clone());
        let pb = Poly::new(b.c.clone());
        Radical::from_poly(a.p, a.root, &pa.mul(&pb))
    }
    fn neg_ref(&self) -> Self {
        Radical {
            p: self.p,
            root: self.root,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.root == 1 {
            return Some(Radical {
                c: vec![self.c[0].recip()],
                ..self.clone()
            });
        }
        let a = Poly::new(self.c.clone());
        let (g, s, _) = a.ext_gcd(&self.modulus());
        debug_assert_eq!(g.degree(), Some(0));
        Some(Radical::from_poly(self.p, self.root, &s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    #[test]
    fn square_root_squares_to_prime() {
        let r = Radical::root_pow(3, 1, 2);
        assert_eq!(r.mul_ref(&r), Radical::rational(int(3)));
        assert_eq!(r.mul_ref(&r).root(), 1);
    }

    #[test]
    fn inverse_of_binomial() {
        let r = Radical::root_pow(5, 1, 3).add_ref(&Radical::rational(int(2)));
        let i = r.inv().unwrap();
        assert!(r.mul_ref(&i).is_one());
    }

    #[test]
    fn alignment_across_roots() {
        let a = Radical::root_pow(3, 1, 2);
        let b = Radical::root_pow(3, 1, 3);
        let c = a.mul_ref(&b);
        assert_eq!(c, Radical::root_pow(3, 5, 6));
        assert_eq!(Radical::root_pow(3, -4, 2), Radical::rational(rat(1, 9)));
    }

    #[test]
    fn display_is_readable() {
        let r = Radical::root_pow(3, 1, 2).sub_ref(&Radical::rational(rat(1, 2)));
        assert_eq!(r.to_string(), "-1/2 + 3^(1/2)");
    }

    #[test]
    fn signs_are_exact() {
        let r = Radical::root_pow(2, 1, 2).sub_ref(&Radical::rational(rat(140, 99)));
        assert_eq!(r.signum(), Some(1));
        assert_eq!(r.neg_ref().signum(), Some(-1));
    }
}
