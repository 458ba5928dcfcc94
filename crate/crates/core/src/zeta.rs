//! Local zeta functions `Z(s, f)` as rational functions of `t = q^-s`,
//! together with the level masses that form their Taylor coefficients.

use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, Signed};

use crate::counting::{count_zeros, singular_primitive_zero, zero_counts};
use crate::error::{Error, Result};
use crate::field::{int, rat_pow, Field};
use crate::form::Form;
use crate::poly::Poly;
use crate::powers::{dispatch, Exponent, IntoValue, PowerBasis, QSpec, Sample, Task, Value};
use crate::qfunc::QFunc;

/// Depth of the level-mass series used by [`zeta_fitted`] when no closed form applies.
pub const DEFAULT_FIT_DEPTH: u32 = 12;

/// Number of coefficients a fitted rational function must reproduce beyond those it was solved from.
pub const FIT_SPARE: usize = 3;

/// First depth tried by [`zeta_fitted_adaptive`].
pub const MIN_FIT_DEPTH: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Residue-field formula for forms whose primitive zeros mod `p` are smooth.
    Spf,
    /// Closed form for anisotropic quadratic forms.
    Elliptic,
    /// Exact Padé fit to counted level masses.
    Fitted,
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Spf => "spf",
            Provenance::Elliptic => "elliptic",
            Provenance::Fitted => "fitted",
            Provenance::User => "user",
        })
    }
}

/// The factor `1 - sign * q^shift * t^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TFactor {
    pub sign: i8,
    pub shift: BigRational,
    pub k: u32,
}

impl TFactor {
    pub fn new(shift: BigRational, k: u32) -> Self {
        TFactor { sign: 1, shift, k }
    }

    fn poly(&self, q: QSpec) -> Poly<QFunc> {
        let c = q_power(q, int(self.sign as i64), &self.shift);
        Poly::one().sub(&Poly::monomial(c, self.k as usize))
    }

    /// `q^shift t^k` at `t = q^-arg`, as an exponent of `q`.
    fn exponent(&self, arg: &Exponent) -> Exponent {
        arg.scale(&-int(self.k as i64)).plus(&self.shift)
    }

    fn halves(&self) -> Option<[TFactor; 2]> {
        if self.sign != 1 || !self.k.is_multiple_of(2) {
            return None;
        }
        let half = &self.shift / int(2);
        Some([
            TFactor { sign: 1, shift: half.clone(), k: self.k / 2 },
            TFactor { sign: -1, shift: half, k: self.k / 2 },
        ])
    }

    pub fn render(&self, q: QSpec, var: &str) -> String {
        let e = self.exponent(&Exponent::param(int(1))).render(var);
        let op = if self.sign > 0 { "-" } else { "+" };
        format!("1 {op} {q}^({e})")
    }
}

/// `c * q^e`, realised as a constant when `q` is a concrete prime.
fn q_power(q: QSpec, c: BigRational, e: &BigRational) -> QFunc {
    match q {
        QSpec::Free => QFunc::q_pow(c, e),
        QSpec::Prime(p) => {
            let r = QFunc::q_pow(c, e).at_prime(p).expect("no pole");
            match r.as_rational() {
                Some(v) => QFunc::from_rational(&v),
                None => QFunc::q_pow(int(1), e),
            }
        }
    }
}

/// `Z(s) = num(t) / den(t)` with `den(0) = 1`.
#[derive(Clone, Debug)]
pub struct RationalZeta {
    q: QSpec,
    n: usize,
    d: u32,
    num: Poly<QFunc>,
    den: Poly<QFunc>,
    factors: Option<Vec<TFactor>>,
    provenance: Provenance,
}

/// Outcome of checking the structural properties every local zeta function has.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    /// `Z(0) = 1`.
    pub value_at_zero: bool,
    /// Every denominator root `t` has `|t| > 1`, so the poles satisfy `Re(s) < 0`.
    pub poles_negative: bool,
    /// The first Taylor coefficients are nonnegative and sum to at most one.
    pub series_is_measure: bool,
    /// `Re(s)` of the poles, by numerical root finding.
    pub pole_real_parts: Vec<f64>,
}

impl InvariantReport {
    pub fn holds(&self) -> bool {
        self.value_at_zero && self.poles_negative && self.series_is_measure
    }
}

impl RationalZeta {
    /// Reduces `num/den` to lowest terms with `den(0) = 1`; `candidates` are
    /// known factors of `den` used for display and pole reports.
    pub fn new(
        q: QSpec,
        n: usize,
        d: u32,
        num: Poly<QFunc>,
        den: Poly<QFunc>,
        candidates: &[TFactor],
        provenance: Provenance,
    ) -> Result<Self> {
        if den.is_zero() || den.coeff(0).is_zero() {
            return Err(Error::Validation("denominator must not vanish at t = 0".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_rem(&g).expect("divisor").0, den.div_rem(&g).expect("divisor").0)
        } else {
            (num, den)
        };
        let c = den.coeff(0).inv().expect("nonzero");
        num = num.scale(&c);
        den = den.scale(&c);
        let factors = factorize(q, &den, candidates);
        Ok(RationalZeta {
            q,
            n,
            d,
            num,
            den,
            factors,
            provenance,
        })
    }

    /// A zeta supplied by the caller, over a concrete prime.
    pub fn user(p: u64, n: usize, d: u32, num: &[BigRational], den: &[BigRational]) -> Result<Self> {
        let lift = |v: &[BigRational]| Poly::new(v.iter().map(QFunc::from_rational).collect());
        Self::new(QSpec::Prime(p), n, d, lift(num), lift(den), &[], Provenance::User)
    }

    pub fn q(&self) -> QSpec {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn num(&self) -> &Poly<QFunc> {
        &self.num
    }

    pub fn den(&self) -> &Poly<QFunc> {
        &self.den
    }

    /// The denominator as a product of binomials, when known.
    pub fn factors(&self) -> Option<&[TFactor]> {
        self.factors.as_deref()
    }

    /// Exact coefficient strings, lowest degree first.
    pub fn num_strings(&self) -> Vec<String> {
        self.num.coeffs().iter().map(ToString::to_string).collect()
    }

    pub fn den_strings(&self) -> Vec<String> {
        self.den.coeffs().iter().map(ToString::to_string).collect()
    }

    /// The same zeta with `q` set to a prime.
    pub fn specialize(&self, p: u64) -> Result<Self> {
        if let QSpec::Prime(q) = self.q {
            if q == p {
                return Ok(self.clone());
            }
            return Err(Error::invalid(format!("zeta is defined over q = {q}, not {p}")));
        }
        let at = |c: &QFunc| -> Result<QFunc> {
            let r = c
                .at_prime(p)
                .ok_or_else(|| Error::pole(format!("coefficient {c} at q = {p}")))?;
            Ok(r.as_rational().map(|v| QFunc::from_rational(&v)).unwrap_or_else(|| c.clone()))
        };
        let num = Poly::new(self.num.coeffs().iter().map(at).collect::<Result<_>>()?);
        let den = Poly::new(self.den.coeffs().iter().map(at).collect::<Result<_>>()?);
        let cands = self.factors.clone().unwrap_or_default();
        Self::new(QSpec::Prime(p), self.n, self.d, num, den, &cands, self.provenance)
    }

    /// Taylor coefficients in `t`.
    pub fn series(&self, len: usize) -> Vec<QFunc> {
        self.num.series_div(&self.den, len).expect("den(0) = 1")
    }

    /// Taylor coefficients as rationals; needs a concrete prime.
    pub fn masses(&self, len: usize) -> Result<Vec<BigRational>> {
        let p = self.prime()?;
        self.series(len)
            .iter()
            .map(|c| {
                c.at_prime(p)
                    .and_then(|r| r.as_rational())
                    .ok_or_else(|| Error::Unsupported(format!("coefficient {c} is not rational")))
            })
            .collect()
    }

    fn prime(&self) -> Result<u64> {
        match self.q {
            QSpec::Prime(p) => Ok(p),
            QSpec::Free => Err(Error::Unsupported("needs a concrete prime q".into())),
        }
    }

    /// `Z` at `s = arg` in the given basis.
    pub fn eval_at<B: PowerBasis>(&self, b: &B, arg: &Exponent) -> Result<B::K> {
        let t = b.q_pow(&arg.neg())?;
        let horner = |p: &Poly<QFunc>| -> Result<B::K> {
            let mut acc = B::K::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc.mul_ref(&t).add_ref(&b.q_fn(c)?);
            }
            Ok(acc)
        };
        let den = horner(&self.den)?;
        if den.vanishes() {
            return Err(self.pole_error(b, arg));
        }
        horner(&self.num)?
            .div_ref(&den)
            .ok_or_else(|| self.pole_error(b, arg))
    }

    fn pole_error<B: PowerBasis>(&self, b: &B, arg: &Exponent) -> Error {
        let var = "s";
        if let Some(fs) = &self.factors {
            for f in fs {
                let v = f
                    .poly(self.q)
                    .map(|c| b.q_fn(c).unwrap_or_else(|_| B::K::zero()));
                let t = match b.q_pow(&arg.neg()) {
                    Ok(t) => t,
                    Err(e) => return e,
                };
                if v.eval(&t).vanishes() {
                    return Error::pole(f.render(self.q, var));
                }
            }
        }
        Error::pole(format!("denominator {} in t = q^-s", self.render_poly(&self.den)))
    }

    /// Structural checks: `Z(0) = 1`, poles in `Re(s) < 0`, nonnegative masses.
    pub fn check_invariants(&self) -> Result<InvariantReport> {
        let one_num = self.num.eval(&QFunc::one());
        let one_den = self.den.eval(&QFunc::one());
        let value_at_zero = !one_den.is_zero() && one_num == one_den;
        match self.q {
            QSpec::Prime(p) => {
                let den: Option<Vec<BigRational>> = self.den.coeffs().iter().map(|c| c.as_rational()).collect();
                let roots = self.pole_real_parts(p);
                let poles_negative = match den {
                    Some(den) => roots_outside_unit_disk(&den),
                    None => roots.iter().all(|&r| r < 0.0),
                };
                let masses = self.masses(16)?;
                let total: BigRational = masses.iter().sum();
                let series_is_measure =
                    masses.iter().all(|a| !a.is_negative()) && total <= BigRational::one();
                Ok(InvariantReport {
                    value_at_zero,
                    poles_negative,
                    series_is_measure,
                    pole_real_parts: roots,
                })
            }
            QSpec::Free => {
                // Sample primes: the closed forms are uniform in q.
                let mut rep = InvariantReport {
                    value_at_zero,
                    poles_negative: true,
                    series_is_measure: true,
                    pole_real_parts: Vec::new(),
                };
                for p in [3, 5, 7, 11] {
                    let r = self.specialize(p)?.check_invariants()?;
                    rep.poles_negative &= r.poles_negative;
                    rep.series_is_measure &= r.series_is_measure;
                    if rep.pole_real_parts.is_empty() {
                        rep.pole_real_parts = r.pole_real_parts;
                    }
                }
                if let Some(fs) = &self.factors {
                    rep.poles_negative &= fs.iter().all(|f| f.shift.is_negative());
                }
                Ok(rep)
            }
        }
    }

    /// `Re(s)` of each pole, `s = -log(t)/log(q)` over denominator roots `t`.
    pub fn pole_real_parts(&self, p: u64) -> Vec<f64> {
        let coeffs: Vec<f64> = self
            .den
            .coeffs()
            .iter()
            .map(|c| c.at_prime(p).map(|r| r.to_f64()).unwrap_or(f64::NAN))
            .collect();
        let lq = (p as f64).ln();
        let mut out: Vec<f64> = durand_kerner(&coeffs)
            .into_iter()
            .map(|t| -t.norm().ln() / lq)
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    fn q_label(&self) -> String {
        self.q.to_string()
    }

    fn render_poly(&self, p: &Poly<QFunc>) -> String {
        let q = self.q_label();
        p.render(|k| if k == 1 { format!("{q}^(-s)") } else { format!("{q}^(-{k}*s)") })
    }

    /// Closed-form text in `s`, e.g. `(4/9)/(1 - 3^(-1-s))^2`.
    pub fn render(&self) -> String {
        let num = self.render_poly(&self.num);
        let den = match &self.factors {
            Some(fs) if fs.is_empty() => return num,
            Some(fs) => {
                let mut parts: Vec<(String, usize)> = Vec::new();
                for f in fs {
                    let r = f.render(self.q, "s");
                    match parts.iter_mut().find(|(t, _)| *t == r) {
                        Some(e) => e.1 += 1,
                        None => parts.push((r, 1)),
                    }
                }
                let many = parts.len() > 1;
                let joined = parts
                    .into_iter()
                    .map(|(t, m)| if m == 1 { format!("({t})") } else { format!("({t})^{m}") })
                    .collect::<Vec<_>>()
                    .join("*");
                if many {
                    format!("({joined})")
                } else {
                    joined
                }
            }
            None => format!("({})", self.render_poly(&self.den)),
        };
        let num = if self.num.degree() == Some(0) && num.starts_with('(') {
            num
        } else {
            format!("({num})")
        };
        format!("{num}/{den}")
    }
}

impl fmt::Display for RationalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Splits `den` into the candidate binomials (and their square-root halves).
fn factorize(q: QSpec, den: &Poly<QFunc>, candidates: &[TFactor]) -> Option<Vec<TFactor>> {
    let mut pool: Vec<TFactor> = Vec::new();
    let mut stack: Vec<TFactor> = candidates.to_vec();
    while let Some(f) = stack.pop() {
        if let Some(h) = f.halves() {
            stack.extend(h);
        }
        if !pool.contains(&f) {
            pool.push(f);
        }
    }
    pool.sort_by(|a, b| b.k.cmp(&a.k).then(b.sign.cmp(&a.sign)));
    let mut rest = den.clone();
    let mut out = Vec::new();
    for f in &pool {
        let fp = f.poly(q);
        loop {
            if rest.degree().unwrap_or(0) < f.k as usize {
                break;
            }
            match rest.div_rem(&fp) {
                Some((quo, r)) if r.is_zero() => {
                    rest = quo;
                    out.push(f.clone());
                }
                _ => break,
            }
        }
    }
    if rest.degree() == Some(0) && rest.coeff(0).is_one() {
        out.sort_by(|a, b| a.k.cmp(&b.k).then(b.sign.cmp(&a.sign)).then(b.shift.cmp(&a.shift)));
        Some(out)
    } else {
        None
    }
}

/// Exact test that every root of `den` (lowest degree first) has modulus > 1.
pub fn roots_outside_unit_disk(den: &[BigRational]) -> bool {
    let mut a: Vec<BigRational> = den.iter().rev().cloned().collect();
    while a.first().is_some_and(|c| c.is_zero()) {
        // Reversal of a polynomial with den(0) != 0 keeps full degree; zeros here mean root t = infinity.
        a.remove(0);
    }
    // Schur-Cohn on the reversed polynomial: all roots strictly inside the unit disk.
    loop {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        let k = match a.len() {
            0 => return false,
            1 => return true,
            l => l - 1,
        };
        let (a0, ak) = (a[0].clone(), a[k].clone());
        if a0.abs() >= ak.abs() {
            return false;
        }
        a = (1..=k).map(|i| &ak * &a[i] - &a0 * &a[k - i]).collect();
    }
}

/// All complex roots of a polynomial (coefficients lowest degree first).
pub fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|x| Complex64::new(x / lead, 0.0)).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let radius = 1.0 + monic[..deg].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Counted level masses `a_m = vol{x in Z_p^n : v(f(x)) = m}` for `m <= M`.
#[derive(Clone, Debug)]
pub struct LevelMassSeries {
    pub p: u64,
    pub n: usize,
    /// `N_0, ..., N_{M+1}`.
    pub counts: Vec<BigInt>,
    pub masses: Vec<BigRational>,
    /// Rational zeta whose series continues the masses exactly.
    pub tail: Option<RationalZeta>,
}

impl LevelMassSeries {
    pub fn from_counts(p: u64, n: usize, counts: Vec<BigInt>) -> Self {
        let masses = masses_from_counts(p, n, &counts);
        LevelMassSeries {
            p,
            n,
            counts,
            masses,
            tail: None,
        }
    }

    pub fn depth(&self) -> u32 {
        self.masses.len() as u32 - 1
    }

    /// `vol{v(f) > M}`.
    pub fn tail_volume(&self) -> BigRational {
        let m = self.counts.len() - 1;
        BigRational::new(self.counts[m].clone(), 1.into()) * rat_pow(self.p, -((m * self.n) as i64))
    }

    /// `a_m`, from the tail beyond the counted depth.
    pub fn mass(&self, m: usize) -> Option<BigRational> {
        if m < self.masses.len() {
            return Some(self.masses[m].clone());
        }
        self.tail.as_ref()?.masses(m + 1).ok()?.pop()
    }

    /// Attaches `z` after checking its series against the counted masses.
    pub fn with_tail(mut self, z: &RationalZeta) -> Result<Self> {
        let z = z.specialize(self.p)?;
        if z.dim() != self.n {
            return Err(Error::Validation(format!(
                "zeta is for n = {}, masses for n = {}",
                z.dim(),
                self.n
            )));
        }
        if let Some((m, counted, series)) = series_mismatch(&z, &self.masses)? {
            return Err(Error::Validation(format!(
                "series mismatch at t^{m}: counted mass {counted}, zeta coefficient {series}"
            )));
        }
        self.tail = Some(z);
        Ok(self)
    }
}

/// First index where the series of `z` differs from `masses`, with both values.
pub fn series_mismatch(
    z: &RationalZeta,
    masses: &[BigRational],
) -> Result<Option<(usize, BigRational, BigRational)>> {
    let s = z.masses(masses.len())?;
    Ok(masses
        .iter()
        .zip(s)
        .enumerate()
        .find(|(_, (a, b))| *a != b)
        .map(|(m, (a, b))| (m, a.clone(), b)))
}

/// `a_m = N_m q^(-mn) - N_{m+1} q^(-(m+1)n)` from `N_0..N_{M+1}`.
pub fn masses_from_counts(p: u64, n: usize, counts: &[BigInt]) -> Vec<BigRational> {
    let vol = |m: usize| BigRational::new(counts[m].clone(), 1.into()) * rat_pow(p, -((m * n) as i64));
    (0..counts.len().saturating_sub(1)).map(|m| vol(m) - vol(m + 1)).collect()
}

/// Level masses to depth `m_max`, validated against `z` when given.
pub fn level_masses(f: &Form, m_max: u32, z: Option<&RationalZeta>) -> Result<LevelMassSeries> {
    let counts = zero_counts(f, m_max + 1)?;
    let s = LevelMassSeries::from_counts(f.prime(), f.dim(), counts);
    match z {
        Some(z) => s.with_tail(z),
        None => Ok(s),
    }
}

/// `sum_{m <= M} a_m t^m`.
pub fn zeta_truncated(f: &Form, m_max: u32) -> Result<Poly<BigRational>> {
    Ok(Poly::new(level_masses(f, m_max, None)?.masses))
}

/// The residue-field closed form with `N` zeros mod `p` (origin included).
pub fn zeta_spf_formula(q: QSpec, n: usize, d: u32, big_n: &QFunc) -> Result<RationalZeta> {
    let qp = |e: i64| q_power(q, int(1), &int(e));
    let ni = n as i64;
    let c0 = QFunc::one().sub_ref(&qp(-ni).mul_ref(big_n));
    let c1 = qp(-ni - 1)
        .add_ref(&qp(-ni).mul_ref(&big_n.sub_ref(&QFunc::one())))
        .sub_ref(&qp(-1));
    let f1 = TFactor::new(int(-1), 1);
    let f2 = TFactor::new(int(-ni), d);
    let den = f1.poly(q).mul(&f2.poly(q));
    RationalZeta::new(q, n, d, Poly::new(vec![c0, c1]), den, &[f1, f2], Provenance::Spf)
}

/// `Z(s, f)` for a primitive form whose nonzero zeros mod `p` are all smooth.
pub fn zeta_spf(f: &Form) -> Result<RationalZeta> {
    if !f.is_primitive() {
        return Err(Error::Precondition(format!(
            "{f} is not primitive: every coefficient is divisible by {}",
            f.prime()
        )));
    }
    if let Some(a) = singular_primitive_zero(f)? {
        return Err(Error::Precondition(format!(
            "{f} has the singular zero {a:?} mod {}",
            f.prime()
        )));
    }
    let big_n = count_zeros(f, 1)?;
    let z = zeta_spf_formula(
        QSpec::Prime(f.prime()),
        f.dim(),
        f.degree(),
        &QFunc::from_rational(&BigRational::from_integer(big_n)),
    )?;
    ensure_invariants(z)
}

/// `(1 - q^-n) / (1 - q^(-n-2s))` for an anisotropic quadratic form in `n` variables.
pub fn zeta_elliptic(n: usize, q: QSpec) -> Result<RationalZeta> {
    if !(2..=4).contains(&n) {
        return Err(Error::invalid(format!(
            "anisotropic quadratic forms exist for n in 2..=4, got {n}"
        )));
    }
    if let QSpec::Prime(p) = q {
        crate::padic::require_prime(p)?;
        if p == 2 {
            return Err(Error::Unsupported("elliptic closed form needs q odd".into()));
        }
    }
    let f = TFactor::new(int(-(n as i64)), 2);
    let num = Poly::constant(QFunc::one().sub_ref(&q_power(q, int(1), &int(-(n as i64)))));
    ensure_invariants(RationalZeta::new(q, n, 2, num, f.poly(q), &[f], Provenance::Elliptic)?)
}

fn ensure_invariants(z: RationalZeta) -> Result<RationalZeta> {
    let r = z.check_invariants()?;
    if r.holds() {
        Ok(z)
    } else {
        Err(Error::Validation(format!("constructed zeta {z} violates {r:?}")))
    }
}

/// Exact Padé fit `num/den` (lowest degree first) reproducing every coefficient,
/// with at least `spare` coefficients beyond those used to solve for it.
pub fn fit_rational(c: &[BigRational], spare: usize) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let len = c.len();
    let at = |i: i64| if i < 0 { BigRational::zero() } else { c[i as usize].clone() };
    for total in 0..len {
        if total + 1 + spare > len {
            break;
        }
        for k in 0..=total {
            let l = total - k;
            // Solve sum_{j=0..k} b_j c_{i-j} = 0 for i = l+1..l+k with b_0 = 1.
            let mut rows: Vec<Vec<BigRational>> = (1..=k)
                .map(|r| {
                    let i = (l + r) as i64;
                    let mut row: Vec<BigRational> = (1..=k).map(|j| at(i - j as i64)).collect();
                    row.push(-at(i));
                    row
                })
                .collect();
            let Some(b) = solve(&mut rows, k) else { continue };
            let mut den = vec![BigRational::one()];
            den.extend(b);
            let num: Vec<BigRational> = (0..=l)
                .map(|i| (0..=k.min(i)).map(|j| &den[j] * at((i - j) as i64)).sum())
                .collect();
            let np = Poly::new(num.clone());
            let dp = Poly::new(den.clone());
            if np.series_div(&dp, len).as_deref() == Some(c) {
                return Some((num, den));
            }
        }
    }
    None
}

fn solve(rows: &mut [Vec<BigRational>], k: usize) -> Option<Vec<BigRational>> {
    for col in 0..k {
        let piv = (col..k).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, piv);
        let inv = rows[col][col].recip();
        for c in col..=k {
            rows[col][c] = &rows[col][c] * &inv;
        }
        for r in 0..k {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=k {
                    let t = &f * &rows[col][c];
                    rows[r][c] -= t;
                }
            }
        }
    }
    Some(rows.iter().map(|r| r[k].clone()).collect())
}

/// A rational zeta fitted exactly to level masses up to `depth`.
pub fn zeta_fitted(f: &Form, depth: u32) -> Result<RationalZeta> {
    let s = level_masses(f, depth, None)?;
    let fit = fit_rational(&s.masses, FIT_SPARE).ok_or_else(|| {
        Error::Validation(format!(
            "no rational function reproduces the {} counted masses of {f}",
            s.masses.len()
        ))
    })?;
    fitted_zeta(f, fit)
}

/// Fits at increasing depths up to `max_depth`, accepting a fit once two
/// consecutive depths agree on it; stops early when counting exceeds the budget.
pub fn zeta_fitted_adaptive(f: &Form, max_depth: u32) -> Result<RationalZeta> {
    let mut last: Option<(Vec<BigRational>, Vec<BigRational>)> = None;
    let mut depth = MIN_FIT_DEPTH.min(max_depth);
    loop {
        let s = level_masses(f, depth, None)?;
        let fit = fit_rational(&s.masses, FIT_SPARE);
        if let Some(z) = fit.clone().filter(|_| fit == last || depth >= max_depth) {
            return fitted_zeta(f, z);
        }
        if depth >= max_depth {
            return Err(Error::Validation(format!(
                "no rational function reproduces the {} counted masses of {f}",
                s.masses.len()
            )));
        }
        last = fit;
        depth = (depth + 2).min(max_depth);
    }
}

fn fitted_zeta(f: &Form, (num, den): (Vec<BigRational>, Vec<BigRational>)) -> Result<RationalZeta> {
    let lift = |v: &[BigRational]| Poly::new(v.iter().map(QFunc::from_rational).collect());
    let q = QSpec::Prime(f.prime());
    let cands = guess_factors(f.prime(), &den);
    let z = RationalZeta::new(q, f.dim(), f.degree(), lift(&num), lift(&den), &cands, Provenance::Fitted)?;
    ensure_invariants(z)
}

/// Binomials `1 - p^c t^k` that could divide a fitted denominator.
fn guess_factors(p: u64, den: &[BigRational]) -> Vec<TFactor> {
    let deg = den.len().saturating_sub(1);
    let mut out = Vec::new();
    for k in 1..=deg as u32 {
        for c in -(4 * deg as i64 * 8)..0 {
            let f = TFactor::new(int(c), k);
            let fp = f.poly(QSpec::Prime(p));
            let d = Poly::new(den.iter().map(QFunc::from_rational).collect());
            if let Some((_, r)) = d.div_rem(&fp) {
                if r.is_zero() {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// The closed form when its hypotheses hold, otherwise an exact fit to the counted masses.
///
/// Variables absent from `f` integrate to 1, so the zeta of the form in its
/// essential variables is reused with the ambient dimension.
pub fn zeta_for_form(f: &Form) -> Result<RationalZeta> {
    if let Some(g) = f.essential() {
        let mut z = zeta_for_form(&g)?;
        z.n = f.dim();
        return Ok(z);
    }
    match zeta_spf(f) {
        Ok(z) => Ok(z),
        Err(Error::Precondition(_)) => zeta_fitted_adaptive(f, DEFAULT_FIT_DEPTH),
        Err(e) => Err(e),
    }
}

struct EvalTask<'a> {
    z: &'a RationalZeta,
    level: i64,
}

impl Task for EvalTask<'_> {
    type Out = Value;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        let s = Exponent::sigma();
        let z = self.z.eval_at(b, &s)?;
        let (n, d, l) = (self.z.n as i64, self.z.d as i64, self.level);
        let scale = b.q_pow(&Exponent::new(int(-d * l), int(-n * l)))?;
        Ok(z.mul_ref(&scale).to_value())
    }
}

/// `Z(s)`, exact for rational `s` and numeric for complex `s`.
pub fn eval_zeta(z: &RationalZeta, s: &Sample) -> Result<Value> {
    scaled_pairing(z, 0, s)
}

/// `<|f|^s, Omega_l> = q^(-nl-dls) Z(s)`.
pub fn scaled_pairing(z: &RationalZeta, l: i64, s: &Sample) -> Result<Value> {
    dispatch(z.q, s, &EvalTask { z, level: l })
}
