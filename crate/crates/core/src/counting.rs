//! Zero counts of forms modulo prime powers, and the residue-field checks built on them.

use std::sync::atomic::{AtomicU64, Ordering};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::form::{Form, ModEval};
use crate::padic::{budget, check_budget};

fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("modulus fits in 64 bits")
}

fn big_pow(p: u64, e: u64) -> BigInt {
    num::pow(BigInt::from(p), e as usize)
}

/// Advances `x` through `[0, m)^len` with the last coordinate fastest; false at wrap-around.
pub(crate) fn odometer(x: &mut [u64], m: u64) -> bool {
    for xi in x.iter_mut().rev() {
        *xi += 1;
        if *xi < m {
            return true;
        }
        *xi = 0;
    }
    false
}

/// `N_m = #{x mod p^m : f(x) = 0 mod p^m}` by direct enumeration; `N_0 = 1`.
pub fn count_zeros(f: &Form, m: u32) -> Result<BigInt> {
    count_zeros_with_budget(f, m, budget())
}

pub fn count_zeros_with_budget(f: &Form, m: u32, budget: u128) -> Result<BigInt> {
    if m == 0 {
        return Ok(BigInt::one());
    }
    let (p, n) = (f.prime(), f.dim());
    check_budget(p, m as u64 * n as u64, budget)?;
    let modulus = pow_u64(p, m);
    let ev = f.evaluator(modulus);
    let total: u64 = (0..modulus)
        .into_par_iter()
        .map(|x0| {
            let mut x = vec![0u64; n];
            x[0] = x0;
            let mut hits = 0u64;
            loop {
                if ev.eval(&x) == 0 {
                    hits += 1;
                }
                if !odometer(&mut x[1..], modulus) {
                    break;
                }
            }
            hits
        })
        .sum();
    Ok(BigInt::from(total))
}

/// `N_m` through the homogeneity recursion and Hensel lifting; agrees with
/// [`count_zeros`] and touches far fewer points.
pub fn count_zeros_fast(f: &Form, m: u32) -> Result<BigInt> {
    Ok(zero_counts_with_budget(f, m, budget())?.pop().expect("nonempty"))
}

/// `[N_0, ..., N_m]` computed as in [`count_zeros_fast`].
pub fn zero_counts(f: &Form, m: u32) -> Result<Vec<BigInt>> {
    zero_counts_with_budget(f, m, budget())
}

pub fn zero_counts_with_budget(f: &Form, m: u32, budget: u128) -> Result<Vec<BigInt>> {
    let (p, n) = (f.prime(), f.dim() as u64);
    if let Some(g) = f.essential() {
        // Absent variables are free: N_k(f) = p^(k (n - n')) N_k(g).
        let free = n - g.dim() as u64;
        let inner = zero_counts_with_budget(&g, m, budget)?;
        return Ok(inner
            .into_iter()
            .enumerate()
            .map(|(k, c)| c * big_pow(p, free * k as u64))
            .collect());
    }
    let content = content_valuation(f);
    if content == 0 {
        return primitive_form_counts(f, m, budget);
    }
    // f = p^e g with g primitive.
    let pe = BigInt::from(p).pow(content);
    let g = Form::from_terms(
        f.dim(),
        p,
        f.terms().iter().map(|(e, c)| (e.clone(), c / &pe)).collect(),
    )?;
    let inner = primitive_form_counts(&g, m.saturating_sub(content), budget)?;
    Ok((0..=m)
        .map(|k| {
            if k <= content {
                big_pow(p, n * k as u64)
            } else {
                big_pow(p, n * content as u64) * &inner[(k - content) as usize]
            }
        })
        .collect())
}

fn content_valuation(f: &Form) -> u32 {
    let p = BigInt::from(f.prime());
    f.terms()
        .iter()
        .map(|(_, c)| {
            let mut c = c.clone();
            let mut v = 0;
            while c.is_multiple_of(&p) {
                c /= &p;
                v += 1;
            }
            v
        })
        .min()
        .unwrap_or(0)
}

fn primitive_form_counts(f: &Form, m: u32, budget: u128) -> Result<Vec<BigInt>> {
    let (p, n, d) = (f.prime(), f.dim() as u64, f.degree());
    let prim = primitive_zero_counts(f, m, budget)?;
    let mut out = vec![BigInt::one()];
    for k in 1..=m {
        let scaled = if k >= d {
            big_pow(p, n * (d as u64 - 1)) * &out[(k - d) as usize]
        } else {
            big_pow(p, n * (k as u64 - 1))
        };
        out.push(&prim[k as usize] + scaled);
    }
    Ok(out)
}

struct Lifter {
    p: u64,
    n: usize,
    m: u32,
    f: ModEval,
    grad: Vec<ModEval>,
    evaluations: AtomicU64,
    budget: u128,
}

/// `v_p(x)` for `x` reduced mod `p^cap`, with `0` mapped to `cap`.
pub(crate) fn val(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

impl Lifter {
    fn new(f: &Form, m: u32, budget: u128) -> Self {
        let p = f.prime();
        let modulus = pow_u64(p, m.max(1));
        Lifter {
            p,
            n: f.dim(),
            m: m.max(1),
            f: f.evaluator(modulus),
            grad: f.gradient().iter().map(|g| ModEval::new(g, modulus)).collect(),
            evaluations: AtomicU64::new(0),
            budget,
        }
    }

    fn smooth(&self, x: &[u64]) -> bool {
        self.grad.iter().any(|g| g.eval(x) % self.p != 0)
    }

    fn charge(&self, k: u64) -> Result<()> {
        let used = self.evaluations.fetch_add(k, Ordering::Relaxed) + k;
        if used as u128 > self.budget {
            Err(Error::Budget {
                required: format!("more than {used}"),
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Primitive zeros mod `p`.
    fn roots(&self) -> Result<Vec<Vec<u64>>> {
        check_budget(self.p, self.n as u64, self.budget)?;
        let fp = self.f.reduced(self.p);
        let mut x = vec![0u64; self.n];
        let mut out = Vec::new();
        while odometer(&mut x, self.p) {
            if fp.eval(&x) == 0 {
                out.push(x.clone());
            }
        }
        Ok(out)
    }

    /// Zeros mod `p^j` inside the ball `x + p^k Z_p^n`, for `j = k..=m`, when
    /// the gradient valuation `e` at `x` is below `k`.
    ///
    /// On that ball `f(x + p^k w) = f(x) + p^(k+e) g(w)` with `g` a submersion,
    /// so `g` pushes Haar measure to Haar measure and the counts are explicit.
    fn closed_form(&self, x: &[u64], k: u32) -> Option<Vec<BigInt>> {
        let e = self.grad.iter().map(|g| val(g.eval(x), self.p, self.m)).min()?;
        if e >= k {
            return None;
        }
        let c = val(self.f.eval(x), self.p, self.m);
        let n = self.n as u64;
        Some(
            (k..=self.m)
                .map(|j| {
                    let r = (j - k) as u64;
                    if j <= k + e {
                        if c >= j {
                            big_pow(self.p, n * r)
                        } else {
                            BigInt::zero()
                        }
                    } else if c >= k + e {
                        big_pow(self.p, n * r - (r - e as u64))
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
        )
    }

    /// Children of `x` (a zero mod `p^k`) that are zeros mod `p^(k+1)`.
    fn children(&self, x: &[u64], k: u32) -> Result<Vec<Vec<u64>>> {
        self.charge(checked_count(self.p, self.n))?;
        let step = pow_u64(self.p, k);
        let mut t = vec![0u64; self.n];
        let mut out = Vec::new();
        loop {
            let y: Vec<u64> = x.iter().zip(&t).map(|(a, b)| a + step * b).collect();
            if val(self.f.eval(&y), self.p, self.m) > k {
                out.push(y);
            }
            if !odometer(&mut t, self.p) {
                return Ok(out);
            }
        }
    }

    /// Adds the zeros above `x` (a zero mod `p^k`) to `acc[k..=m]`.
    fn descend(&self, x: &[u64], k: u32, acc: &mut [BigInt]) -> Result<()> {
        if let Some(counts) = self.closed_form(x, k) {
            for (a, c) in acc[k as usize..].iter_mut().zip(counts) {
                *a += c;
            }
            return Ok(());
        }
        acc[k as usize] += 1;
        if k == self.m {
            return Ok(());
        }
        for y in self.children(x, k)? {
            self.descend(&y, k + 1, acc)?;
        }
        Ok(())
    }

    /// Whether some zero mod `p^m` lies above `x`.
    fn any_deep(&self, x: &[u64], k: u32) -> Result<bool> {
        if let Some(counts) = self.closed_form(x, k) {
            return Ok(!counts.last().expect("nonempty").is_zero());
        }
        if k == self.m {
            return Ok(true);
        }
        for y in self.children(x, k)? {
            if self.any_deep(&y, k + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn checked_count(p: u64, n: usize) -> u64 {
    p.saturating_pow(n as u32)
}

/// `P_k` for `k = 0..=m`: primitive zeros mod `p^k` (`P_0 = 0`).
fn primitive_zero_counts(f: &Form, m: u32, budget: u128) -> Result<Vec<BigInt>> {
    let mut acc = vec![BigInt::zero(); m as usize + 1];
    if m == 0 {
        return Ok(acc);
    }
    let lifter = Lifter::new(f, m, budget);
    let parts: Vec<Vec<BigInt>> = lifter
        .roots()?
        .par_iter()
        .map(|x| {
            let mut a = vec![BigInt::zero(); m as usize + 1];
            lifter.descend(x, 1, &mut a).map(|_| a)
        })
        .collect::<Result<_>>()?;
    for a in parts {
        for (s, v) in acc.iter_mut().zip(a) {
            *s += v;
        }
    }
    Ok(acc)
}

/// Whether `f` has a zero mod `p^m` with some coordinate a unit.
pub fn has_primitive_zero(f: &Form, m: u32) -> Result<bool> {
    if m == 0 {
        return Ok(true);
    }
    let lifter = Lifter::new(f, m, budget());
    for x in lifter.roots()? {
        if lifter.any_deep(&x, 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A nonzero `a` in `F_p^n` with `f(a) = 0` and every partial derivative zero, if any.
pub fn singular_primitive_zero(f: &Form) -> Result<Option<Vec<u64>>> {
    let lifter = Lifter::new(f, 1, budget());
    Ok(lifter.roots()?.into_iter().find(|x| !lifter.smooth(x)))
}

/// True iff every nonzero zero of `f mod p` is a smooth point.
pub fn smooth_primitive_check(f: &Form) -> Result<bool> {
    Ok(singular_primitive_zero(f)?.is_none())
}

/// Gram matrix `B` with `h(x) = x^T B x / 2`.
fn gram_matrix(h: &Form) -> Vec<Vec<BigRational>> {
    let n = h.dim();
    let mut b = vec![vec![BigRational::zero(); n]; n];
    for (e, c) in h.terms() {
        let idx: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
            .collect();
        let c = BigRational::from_integer(c.clone());
        match idx[..] {
            [i, j] if i == j => b[i][i] += &c * BigRational::from_integer(2.into()),
            [i, j] => {
                b[i][j] += &c;
                b[j][i] += &c;
            }
            _ => unreachable!("quadratic"),
        }
    }
    b
}

fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            let k = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &k * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Lifting depth that certifies anisotropy: `max(3, 2 v_p(det B) + 1)`.
pub fn anisotropy_depth(h: &Form) -> Result<u32> {
    if h.degree() != 2 {
        return Err(Error::Precondition(format!(
            "anisotropy check needs a quadratic form, got degree {}",
            h.degree()
        )));
    }
    if h.prime() == 2 {
        return Err(Error::Precondition("anisotropy check needs p odd".into()));
    }
    let det = determinant(gram_matrix(h));
    if det.is_zero() {
        return Err(Error::Precondition(format!("degenerate quadratic form {h}")));
    }
    let p = BigInt::from(h.prime());
    let mut v = 0u32;
    let mut num = det.numer().abs();
    while num.is_multiple_of(&p) {
        num /= &p;
        v += 1;
    }
    Ok((2 * v + 1).max(3))
}

/// True iff `h` has no primitive zero at the certifying depth.
pub fn anisotropy_check(h: &Form) -> Result<bool> {
    let depth = anisotropy_depth(h)?;
    Ok(!has_primitive_zero(h, depth)?)
}

fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r = 1u128;
    let (mut b, mut e) = (a as u128, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic non-residue mod `p`.
pub fn least_nonresidue(p: u64) -> i64 {
    (2..).find(|&a| legendre(a, p) == -1).expect("odd prime")
}

/// Anisotropic quadratic forms over `Q_p` in `n` variables.
///
/// `n = 2`: `x1^2 - tau x2^2` for `tau` in `{e, p, e p}`; `n = 3`:
/// `-p x1^2 + x2^2 - e x3^2`; `n = 4`: `x1^2 - s x2^2 - p x3^2 + s p x4^2`.
/// Here `e = -1` when `p = 3 mod 4` (else the least non-residue) and `s` is
/// the least positive non-residue.
pub fn catalog_anisotropic(n: usize, p: u64) -> Result<Vec<Form>> {
    if p == 2 {
        return Err(Error::Unsupported("the anisotropic catalog needs p odd".into()));
    }
    crate::padic::require_prime(p)?;
    let s = least_nonresidue(p);
    let e = if p % 4 == 3 { -1 } else { s };
    let pi = p as i64;
    let diag = |cs: &[i64]| -> Result<Form> {
        let terms = cs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let mut ex = vec![0u32; cs.len()];
                ex[i] = 2;
                (ex, BigInt::from(c))
            })
            .collect();
        Form::from_terms(cs.len(), p, terms)
    };
    let forms = match n {
        2 => vec![diag(&[1, -e])?, diag(&[1, -pi])?, diag(&[1, -e * pi])?],
        3 => vec![diag(&[-pi, 1, -e])?],
        4 => vec![diag(&[1, -s, -pi, s * pi])?],
        _ => {
            return Err(Error::invalid(format!(
                "anisotropic quadratic forms exist for n in 2..=4, got {n}"
            )))
        }
    };
    debug_assert!(forms.iter().all(|f| anisotropy_check(f).unwrap_or(false)));
    Ok(forms)
}
