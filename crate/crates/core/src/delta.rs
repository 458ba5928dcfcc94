//! The algebra spanned by ball indicators `W[l]` = 1 on `(p^l Z_p)^n`.

use std::collections::BTreeMap;
use std::fmt;

use num::BigRational;

use crate::error::{Error, Result};
use crate::field::{int, parse_rational, rat_pow, Field};
use crate::padic::{PAdicVector, Valuation};
use crate::powers::{Exponent, PowerBasis};

/// `sum_l c_l * W[l]` with nonzero coefficients, keyed by level.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaFunction<K: Field = BigRational> {
    p: u64,
    n: usize,
    terms: BTreeMap<i64, K>,
}

impl<K: Field> DeltaFunction<K> {
    pub fn zero(p: u64, n: usize) -> Self {
        DeltaFunction {
            p,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `W[l]`
    pub fn ball(p: u64, n: usize, l: i64) -> Self {
        Self::from_terms(p, n, [(l, K::one())])
    }

    pub fn from_terms(p: u64, n: usize, terms: impl IntoIterator<Item = (i64, K)>) -> Self {
        let mut out = Self::zero(p, n);
        for (l, c) in terms {
            out.add_term(l, c);
        }
        out
    }

    fn add_term(&mut self, l: i64, c: K) {
        let v = match self.terms.remove(&l) {
            Some(old) => old.add_ref(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(l, v);
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &K)> {
        self.terms.iter().map(|(l, c)| (*l, c))
    }

    pub fn coefficient(&self, l: i64) -> K {
        self.terms.get(&l).cloned().unwrap_or_else(K::zero)
    }

    /// Supported on `Z_p^n` (all levels `>= 0`).
    pub fn in_delta0(&self) -> bool {
        self.terms.keys().all(|&l| l >= 0)
    }

    /// Constant outside `Z_p^n` (all levels `<= 0`).
    pub fn in_delta_inf(&self) -> bool {
        self.terms.keys().all(|&l| l <= 0)
    }

    fn scalar(&self, l_exp: i64) -> K {
        K::from_rational(&rat_pow(self.p, l_exp))
    }

    fn compatible(&self, o: &Self) {
        assert!(
            self.p == o.p && self.n == o.n,
            "mixing test functions over different (p, n)"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.compatible(o);
        let mut out = self.clone();
        for (l, c) in &o.terms {
            out.add_term(*l, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(K::neg_ref)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::from_terms(self.p, self.n, self.terms.iter().map(|(l, c)| (*l, c.mul_ref(k))))
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> DeltaFunction<L> {
        DeltaFunction::from_terms(self.p, self.n, self.terms.iter().map(|(l, c)| (*l, f(c))))
    }

    /// `W[l] -> q^(-nl) W[-l]`.
    pub fn fourier(&self) -> Self {
        let n = self.n as i64;
        Self::from_terms(
            self.p,
            self.n,
            self.terms
                .iter()
                .map(|(l, c)| (-l, c.mul_ref(&self.scalar(-n * l)))),
        )
    }

    /// Haar integral, `vol(Z_p^n) = 1`.
    pub fn integrate(&self) -> K {
        let n = self.n as i64;
        self.terms
            .iter()
            .fold(K::zero(), |acc, (l, c)| acc.add_ref(&c.mul_ref(&self.scalar(-n * l))))
    }

    /// `W[a] * W[b] = q^(-n max(a,b)) W[min(a,b)]`.
    pub fn convolve(&self, o: &Self) -> Self {
        self.compatible(o);
        let n = self.n as i64;
        let mut out = Self::zero(self.p, self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let c = ca.mul_ref(cb).mul_ref(&self.scalar(-n * (*a).max(*b)));
                out.add_term((*a).min(*b), c);
            }
        }
        out
    }

    /// Pointwise product: `W[a] W[b] = W[max(a,b)]`.
    pub fn mul(&self, o: &Self) -> Self {
        self.compatible(o);
        let mut out = Self::zero(self.p, self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term((*a).max(*b), ca.mul_ref(cb));
            }
        }
        out
    }

    /// Value at any point whose minimal coordinate valuation is `v`.
    pub fn eval_at_valuation(&self, v: Valuation) -> K {
        self.terms
            .iter()
            .filter(|(l, _)| match v {
                Valuation::Infinity => true,
                Valuation::Finite(v) => v >= **l,
            })
            .fold(K::zero(), |acc, (_, c)| acc.add_ref(c))
    }

    pub fn eval(&self, x: &PAdicVector) -> Result<K> {
        if x.dim() != self.n || x.prime() != self.p {
            return Err(Error::invalid("point does not match the test function's (p, n)"));
        }
        Ok(self.eval_at_valuation(x.min_valuation()))
    }

    /// `Phi(0)`.
    pub fn at_origin(&self) -> K {
        self.eval_at_valuation(Valuation::Infinity)
    }
}

impl DeltaFunction<BigRational> {
    pub fn parse(text: &str, p: u64, n: usize) -> Result<Self> {
        parse_delta(text, p, n)
    }
}

impl<K: Field> fmt::Display for DeltaFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-', ' ']) => (true, rest.to_string()),
                _ => (false, s),
            };
            let mag = if mag.contains(' ') { format!("({mag})") } else { mag };
            match (i, neg) {
                (0, true) => write!(f, "-{mag}*W[{l}]")?,
                (0, false) => write!(f, "{mag}*W[{l}]")?,
                (_, true) => write!(f, " - {mag}*W[{l}]")?,
                (_, false) => write!(f, " + {mag}*W[{l}]")?,
            }
        }
        Ok(())
    }
}

fn parse_delta(text: &str, p: u64, n: usize) -> Result<DeltaFunction> {
    crate::padic::require_prime(p)?;
    let err = |column: usize, message: &str| Error::Parse {
        column,
        message: message.into(),
    };
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_whitespace() {
            *i += 1;
        }
    };
    let mut out = DeltaFunction::zero(p, n);
    skip_ws(&mut i);
    if bytes[i..].iter().collect::<String>().trim() == "0" {
        return Ok(out);
    }
    let mut first = true;
    while i < bytes.len() {
        skip_ws(&mut i);
        let mut sign = int(1);
        if i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = int(-1);
            }
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(err(i, "expected '+' or '-'"));
        }
        first = false;
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '/') {
            i += 1;
        }
        let coef = if i > start {
            let s: String = bytes[start..i].iter().collect();
            let c = parse_rational(&s).ok_or_else(|| err(start, "bad coefficient"))?;
            skip_ws(&mut i);
            if i >= bytes.len() || bytes[i] != '*' {
                return Err(err(i, "expected '*'"));
            }
            i += 1;
            skip_ws(&mut i);
            c
        } else {
            int(1)
        };
        if i + 1 >= bytes.len() || bytes[i] != 'W' || bytes[i + 1] != '[' {
            return Err(err(i, "expected 'W['"));
        }
        i += 2;
        let ls = i;
        if i < bytes.len() && bytes[i] == '-' {
            i += 1;
        }
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let l: i64 = bytes[ls..i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| err(ls, "bad level"))?;
        if i >= bytes.len() || bytes[i] != ']' {
            return Err(err(i, "expected ']'"));
        }
        i += 1;
        out.add_term(l, sign * coef);
        skip_ws(&mut i);
    }
    if first {
        return Err(err(0, "empty input"));
    }
    Ok(out)
}

/// `<||x||^a, Phi>`, by the geometric shell sum over each ball.
///
/// Each `W[l]` contributes `(1-q^-n) q^(-l(n+a)) / (1-q^(-n-a))`. Without
/// `continued`, a concrete exponent with `Re(n+a) <= 0` is rejected as divergent;
/// symbolic exponents always take the continued value.
pub fn pair_radial<B: PowerBasis>(
    basis: &B,
    a: &Exponent,
    phi: &DeltaFunction,
    continued: bool,
    var: &str,
) -> Result<B::K> {
    let n = int(phi.n as i64);
    let na = a.plus(&n);
    if !continued {
        if let Some(re) = basis.real_part(&na) {
            if re <= 0.0 {
                return Err(Error::Divergent(format!(
                    "Re(n + a) = {re} <= 0 for a = {}",
                    a.render(var)
                )));
            }
        }
    }
    let factor = basis.one_minus(&na.neg())?;
    if factor.vanishes() {
        return Err(Error::pole(na.neg().factor_text(var)));
    }
    let shell = basis.one_minus(&Exponent::constant(-&n))?;
    let mut acc = B::K::zero();
    for (l, c) in phi.terms() {
        let e = na.scale(&int(-l));
        acc = acc.add_ref(&basis.lift(c).mul_ref(&basis.q_pow(&e)?));
    }
    acc.mul_ref(&shell)
        .div_ref(&factor)
        .ok_or_else(|| Error::pole(na.neg().factor_text(var)))
}

/// `coeff * ||x||^a` on `Q_p^n \ {0}`.
#[derive(Clone, Debug)]
pub struct RadialPower<K: Field> {
    pub n: usize,
    pub coeff: K,
    pub exponent: Exponent,
}

impl<K: Field> RadialPower<K> {
    /// `<coeff ||x||^a, Phi>` with the continued shell sum.
    pub fn pair<B: PowerBasis<K = K>>(&self, basis: &B, phi: &DeltaFunction, var: &str) -> Result<K> {
        if phi.dim() != self.n {
            return Err(Error::invalid("dimension mismatch"));
        }
        Ok(self
            .coeff
            .mul_ref(&pair_radial(basis, &self.exponent, phi, true, var)?))
    }
}
