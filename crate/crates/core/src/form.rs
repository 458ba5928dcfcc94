//! Homogeneous integer forms in `x1..xn`.

use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::require_prime;

/// A monomial exponent vector and its integer coefficient.
pub type Term = (Vec<u32>, BigInt);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    n: usize,
    d: u32,
    p: u64,
    terms: Vec<Term>,
    primitive: bool,
}

fn render_monomial(e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{k}", i + 1)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn render_term(e: &[u32], c: &BigInt) -> String {
    let mono = render_monomial(e);
    if c.is_one() {
        mono
    } else if mono == "1" {
        c.to_string()
    } else {
        format!("{c}*{mono}")
    }
}

impl Form {
    /// Builds a form from terms, combining duplicates and checking homogeneity.
    pub fn from_terms(n: usize, p: u64, raw: Vec<Term>) -> Result<Self> {
        require_prime(p)?;
        if n == 0 {
            return Err(Error::invalid("a form needs at least one variable"));
        }
        let mut terms: Vec<Term> = Vec::new();
        for (e, c) in raw {
            if e.len() != n {
                return Err(Error::invalid("exponent vector length differs from n"));
            }
            match terms.iter_mut().find(|(f, _)| *f == e) {
                Some(t) => t.1 += c,
                None => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        let Some(first) = terms.first() else {
            return Err(Error::invalid("the zero polynomial is not a form"));
        };
        let d: u32 = first.0.iter().sum();
        let offending: Vec<String> = terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() != d)
            .map(|(e, c)| render_term(e, c))
            .collect();
        if !offending.is_empty() {
            return Err(Error::Homogeneity {
                degree: d,
                offending,
            });
        }
        if d == 0 {
            return Err(Error::invalid("constant polynomials are not forms"));
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let pb = BigInt::from(p);
        let primitive = terms.iter().any(|(_, c)| !c.is_multiple_of(&pb));
        Ok(Form {
            n,
            d,
            p,
            terms,
            primitive,
        })
    }

    pub fn parse(text: &str, n: usize, p: u64) -> Result<Self> {
        let raw = Parser::new(text, n).form()?;
        Self::from_terms(n, p, raw)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Not every coefficient is divisible by `p`.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// The form in the variables it actually involves, when some are absent.
    pub fn essential(&self) -> Option<Form> {
        let used: Vec<usize> = (0..self.n)
            .filter(|&i| self.terms.iter().any(|(e, _)| e[i] > 0))
            .collect();
        if used.len() == self.n {
            return None;
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        Some(Form::from_terms(used.len(), self.p, terms).expect("nonzero homogeneous"))
    }

    /// The same form read over another prime.
    pub fn with_prime(&self, p: u64) -> Result<Self> {
        Self::from_terms(self.n, p, self.terms.clone())
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&k, xi)| acc * xi.pow(k))
            })
            .sum()
    }

    /// Reduction modulo `modulus` for fast repeated evaluation.
    pub fn evaluator(&self, modulus: u64) -> ModEval {
        ModEval::new(&self.terms, modulus)
    }

    /// `df/dx_i` for each `i`, as raw terms (possibly empty).
    pub fn gradient(&self) -> Vec<Vec<Term>> {
        (0..self.n)
            .map(|i| {
                self.terms
                    .iter()
                    .filter(|(e, _)| e[i] > 0)
                    .map(|(e, c)| {
                        let mut f = e.clone();
                        f[i] -= 1;
                        (f, c * BigInt::from(e[i]))
                    })
                    .collect()
            })
            .collect()
    }

    /// Coefficients in the order of [`Form::terms`], as `i64` when they fit.
    pub fn small_coefficients(&self) -> Option<Vec<i64>> {
        self.terms.iter().map(|(_, c)| c.to_i64()).collect()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let body = render_term(e, &c.abs());
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial terms reduced modulo a fixed modulus.
#[derive(Clone, Debug)]
pub struct ModEval {
    modulus: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModEval {
    pub fn new(terms: &[Term], modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        ModEval {
            modulus,
            terms: terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mod_floor(&m).to_u64().expect("reduced")))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same polynomial modulo a divisor of the current modulus.
    pub fn reduced(&self, modulus: u64) -> Self {
        debug_assert_eq!(self.modulus % modulus, 0);
        ModEval {
            modulus,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c % modulus))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    #[inline]
    pub fn eval(&self, x: &[u64]) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            let m = self.modulus;
            let mut acc = 0u64;
            for (e, c) in &self.terms {
                let mut t = *c;
                for (&k, &xi) in e.iter().zip(x) {
                    let xi = xi % m;
                    for _ in 0..k {
                        t = t * xi % m;
                    }
                }
                acc = (acc + t) % m;
            }
            return acc;
        }
        let m = self.modulus as u128;
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c as u128;
            for (&k, &xi) in e.iter().zip(x) {
                let xi = xi as u128 % m;
                for _ in 0..k {
                    t = t * xi % m;
                }
            }
            acc = (acc + t) % m;
        }
        acc as u64
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: usize) -> Self {
        Parser {
            s: text.as_bytes(),
            i: 0,
            n,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.i,
            message: message.into(),
        }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected an unsigned integer"));
        }
        let t = std::str::from_utf8(&self.s[start..self.i]).expect("ascii");
        Ok(t.parse().expect("digits"))
    }

    fn var(&mut self) -> Result<usize> {
        self.ws();
        let start = self.i;
        if self.s.get(self.i) != Some(&b'x') {
            return Err(self.err("expected a variable x1..xN"));
        }
        self.i += 1;
        let digits = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let idx: usize = std::str::from_utf8(&self.s[digits..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .unwrap_or(0);
        if idx == 0 || idx > self.n {
            self.i = start;
            let name = String::from_utf8_lossy(&self.s[start..digits.max(start + 1)]).to_string();
            return Err(self.err(format!(
                "unknown variable {name}{} (expected x1..x{})",
                std::str::from_utf8(&self.s[digits..]).unwrap_or("").chars().take_while(char::is_ascii_digit).collect::<String>(),
                self.n
            )));
        }
        Ok(idx - 1)
    }

    fn factor(&mut self, e: &mut [u32]) -> Result<()> {
        let v = self.var()?;
        let k = if self.peek() == Some(b'^') {
            self.i += 1;
            self.uint()?
                .to_u32()
                .ok_or_else(|| self.err("exponent too large"))?
        } else {
            1
        };
        e[v] += k;
        Ok(())
    }

    fn term(&mut self) -> Result<Term> {
        let mut e = vec![0u32; self.n];
        let mut c = BigInt::one();
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                c = self.uint()?;
                if self.peek() != Some(b'*') {
                    return Err(self.err("expected '*' after coefficient"));
                }
                self.i += 1;
            }
            Some(b'x') => {}
            Some(_) => return Err(self.err("expected a term")),
            None => return Err(self.err("unexpected end of input")),
        }
        self.factor(&mut e)?;
        while self.peek() == Some(b'*') {
            self.i += 1;
            self.factor(&mut e)?;
        }
        Ok((e, c))
    }

    fn form(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut sign = BigInt::one();
        if self.peek() == Some(b'-') {
            sign = -sign;
            self.i += 1;
        } else if self.peek() == Some(b'+') {
            self.i += 1;
        }
        loop {
            let (e, c) = self.term()?;
            out.push((e, sign * c));
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = BigInt::one(),
                Some(b'-') => sign = -BigInt::one(),
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.i += 1;
        }
    }
}
