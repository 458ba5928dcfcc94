//! 256-bit complex arithmetic on top of `astro-float`.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num::BigRational;

use crate::field::Field;
use crate::radical::Radical;

/// Working precision in bits (about 77 decimal digits).
pub const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// Magnitude below which a numeric value counts as zero for pole detection.
pub const VANISH_TOL: f64 = 1e-20;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

pub fn big_from_rational(r: &BigRational) -> BigFloat {
    with_cc(|cc| {
        let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, PREC, RM, cc);
        let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, PREC, RM, cc);
        n.div(&d, PREC, RM)
    })
}

pub fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_string().parse().unwrap_or(f64::NAN)
}

pub fn big_ln_u64(q: u64) -> BigFloat {
    with_cc(|cc| BigFloat::from_u64(q, PREC).ln(PREC, RM, cc))
}

pub fn big_pi() -> BigFloat {
    with_cc(|cc| cc.pi(PREC, RM))
}

#[derive(Clone, Debug)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        BigComplex {
            re,
            im: BigFloat::from_u64(0, PREC),
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        BigComplex {
            re: BigFloat::from_f64(re, PREC),
            im: BigFloat::from_f64(im, PREC),
        }
    }

    /// Parses decimal strings exactly to working precision.
    pub fn parse(re: &str, im: &str) -> Self {
        with_cc(|cc| BigComplex {
            re: BigFloat::parse(re, Radix::Dec, PREC, RM, cc),
            im: BigFloat::parse(im, Radix::Dec, PREC, RM, cc),
        })
    }

    pub fn from_radical(r: &Radical) -> Self {
        let mut acc = BigFloat::from_u64(0, PREC);
        let lnp = if r.prime() > 1 {
            Some(big_ln_u64(r.prime()))
        } else {
            None
        };
        for (i, c) in r.coeffs().iter().enumerate() {
            if num::Zero::is_zero(c) {
                continue;
            }
            let mut term = big_from_rational(c);
            if i > 0 {
                let lnp = lnp.as_ref().expect("radical with a prime");
                let e = lnp
                    .mul(&BigFloat::from_u64(i as u64, PREC), PREC, RM)
                    .div(&BigFloat::from_u64(r.root() as u64, PREC), PREC, RM);
                term = term.mul(&with_cc(|cc| e.exp(PREC, RM, cc)), PREC, RM);
            }
            acc = acc.add(&term, PREC, RM);
        }
        BigComplex::real(acc)
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn re_f64(&self) -> f64 {
        big_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        big_to_f64(&self.im)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re
            .mul(&self.re, PREC, RM)
            .add(&self.im.mul(&self.im, PREC, RM), PREC, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(PREC, RM)
    }

    pub fn abs_f64(&self) -> f64 {
        big_to_f64(&self.abs())
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        BigComplex {
            re: self.re.mul(k, PREC, RM),
            im: self.im.mul(k, PREC, RM),
        }
    }

    /// `exp(i*theta)` for real `theta`.
    pub fn cis(theta: &BigFloat) -> Self {
        with_cc(|cc| BigComplex {
            re: theta.cos(PREC, RM, cc),
            im: theta.sin(PREC, RM, cc),
        })
    }

    /// `exp(2*pi*i*k/m)`.
    pub fn root_of_unity(k: u64, m: u64) -> Self {
        let theta = big_pi()
            .mul(&BigFloat::from_u64(2 * (k % m), PREC), PREC, RM)
            .div(&BigFloat::from_u64(m, PREC), PREC, RM);
        Self::cis(&theta)
    }

    pub fn exp(&self) -> Self {
        let m = with_cc(|cc| self.re.exp(PREC, RM, cc));
        Self::cis(&self.im).scale(&m)
    }

    /// `q^z = exp(z ln q)`.
    pub fn q_pow(q: u64, z: &BigComplex) -> Self {
        z.scale(&big_ln_u64(q)).exp()
    }
}

impl PartialEq for BigComplex {
    fn eq(&self, o: &Self) -> bool {
        self.re.cmp(&o.re) == Some(0) && self.im.cmp(&o.im) == Some(0)
    }
}

fn short(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string();
    let (mant, exp) = s.split_once('e').unwrap_or((&s, "+0"));
    let e: i64 = exp.parse().unwrap_or(0);
    let neg = mant.starts_with('-');
    let all: Vec<u8> = mant
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    let mut kept: Vec<u8> = all.iter().take(digits).copied().collect();
    let mut e = e;
    if all.get(digits).is_some_and(|&r| r >= 5) {
        let mut i = kept.len();
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                e += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut d: String = kept.iter().map(|k| char::from(b'0' + k)).collect();
    while d.len() > 1 && d.ends_with('0') {
        d.pop();
    }
    let sign = if neg { "-" } else { "" };
    if (-6..=20).contains(&e) {
        let e = e as isize;
        let body = if e >= 0 {
            let int_len = (e + 1) as usize;
            if d.len() <= int_len {
                format!("{d}{}", "0".repeat(int_len - d.len()))
            } else {
                format!("{}.{}", &d[..int_len], &d[int_len..])
            }
        } else {
            format!("0.{}{d}", "0".repeat((-e - 1) as usize))
        };
        format!("{sign}{body}")
    } else {
        let tail = if d.len() > 1 { format!(".{}", &d[1..]) } else { String::new() };
        format!("{sign}{}{tail}e{e}", &d[..1])
    }
}

impl BigComplex {
    /// Decimal rendering with `digits` significant digits.
    pub fn render(&self, digits: usize) -> String {
        let re = short(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = short(&self.im.abs(), digits);
        let sign = if self.im.is_negative() { "-" } else { "+" };
        format!("{re} {sign} {im}i")
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(30))
    }
}

impl Field for BigComplex {
    fn zero() -> Self {
        BigComplex::from_f64(0.0, 0.0)
    }
    fn one() -> Self {
        BigComplex::from_f64(1.0, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        BigComplex::real(big_from_rational(r))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn vanishes(&self) -> bool {
        self.abs_f64() < VANISH_TOL
    }
    fn add_ref(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.add(&o.re, PREC, RM),
            im: self.im.add(&o.im, PREC, RM),
        }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.sub(&o.re, PREC, RM),
            im: self.im.sub(&o.im, PREC, RM),
        }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let re = self
            .re
            .mul(&o.re, PREC, RM)
            .sub(&self.im.mul(&o.im, PREC, RM), PREC, RM);
        let im = self
            .re
            .mul(&o.im, PREC, RM)
            .add(&self.im.mul(&o.re, PREC, RM), PREC, RM);
        BigComplex { re, im }
    }
    fn neg_ref(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(BigComplex {
            re: self.re.div(&n, PREC, RM),
            im: self.im.neg().div(&n, PREC, RM),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn roots_of_unity_close_up() {
        let z = BigComplex::root_of_unity(1, 3);
        let w = z.mul_ref(&z).mul_ref(&z);
        assert!(w.sub_ref(&BigComplex::one()).abs_f64() < 1e-70);
    }

    #[test]
    fn q_power_matches_rational() {
        let z = BigComplex::q_pow(3, &BigComplex::from_f64(-2.0, 0.0));
        let e = BigComplex::from_rational(&rat(1, 9));
        assert!(z.sub_ref(&e).abs_f64() < 1e-70);
    }

    #[test]
    fn radical_conversion() {
        let r = Radical::root_pow(3, 1, 2);
        let z = BigComplex::from_radical(&r);
        assert!((z.re_f64() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rendering() {
        assert_eq!(BigComplex::from_f64(0.9, 0.0).render(10), "0.9");
        assert_eq!(BigComplex::parse("0.99999999996", "0").render(10), "1");
        assert_eq!(BigComplex::from_f64(-1.5, 2.0).render(5), "-1.5 + 2i");
        assert_eq!(BigComplex::from_f64(1.25e-9, 0.0).render(5), "1.25e-9");
    }
}
