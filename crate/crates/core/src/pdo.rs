//! The operator `f(D, beta) Phi = F^-1(|f|^beta F Phi)` on radial test functions,
//! its fundamental solutions and the pairing identities behind them.

use std::fmt;

use num::{BigRational, ToPrimitive};
use rayon::prelude::*;

use crate::counting::{odometer, val};
use crate::delta::{pair_radial, DeltaFunction};
use crate::error::{Error, Inadmissible, Result};
use crate::field::{int, rational_to_f64, Field};
use crate::form::Form;
use crate::numeric::BigComplex;
use crate::padic::{budget, check_budget, fractional_part, valuation, PAdicVector, Valuation};
use crate::powers::{dispatch, Exponent, IntoValue, PowerBasis, QSpec, Sample, Task, Value};
use crate::zeta::{level_masses, zeta_for_form, RationalZeta};

/// Depth to which an operator's zeta is checked against counted level masses.
pub const SPEC_CHECK_DEPTH: u32 = 6;

const VAR: &str = "s";

/// A positive real parameter, exact when rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Rational(BigRational),
    Float(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational(r) => rational_to_f64(r),
            Real::Float(x) => *x,
        }
    }

    fn as_sample(&self) -> Sample {
        match self {
            Real::Rational(r) => Sample::Rational(r.clone()),
            Real::Float(x) => Sample::Complex(BigComplex::from_f64(*x, 0.0)),
        }
    }

    fn neg(&self) -> Real {
        match self {
            Real::Rational(r) => Real::Rational(-r),
            Real::Float(x) => Real::Float(-x),
        }
    }

    /// `a * self + b`.
    pub fn affine(&self, a: i64, b: i64) -> Real {
        match self {
            Real::Rational(r) => Real::Rational(r * int(a) + int(b)),
            Real::Float(x) => Real::Float(*x * a as f64 + b as f64),
        }
    }

    fn equals(&self, r: &BigRational) -> bool {
        match self {
            Real::Rational(x) => x == r,
            Real::Float(x) => (x - rational_to_f64(r)).abs() < 1e-12,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational(r) => write!(f, "{r}"),
            Real::Float(x) => write!(f, "{x}"),
        }
    }
}

/// `f(D, beta)` with the zeta function of `f`.
#[derive(Clone, Debug)]
pub struct OperatorSpec {
    pub form: Form,
    pub beta: Real,
    pub zeta: RationalZeta,
}

impl OperatorSpec {
    /// Checks `beta > 0` and that `zeta` reproduces the counted level masses of `form`.
    pub fn new(form: Form, beta: Real, zeta: RationalZeta) -> Result<Self> {
        if beta.to_f64() <= 0.0 {
            return Err(Error::Inadmissible(vec![Inadmissible::NonPositiveBeta]));
        }
        if zeta.dim() != form.dim() || zeta.degree() != form.degree() {
            return Err(Error::Validation(format!(
                "zeta is for (n, d) = ({}, {}), form has ({}, {})",
                zeta.dim(),
                zeta.degree(),
                form.dim(),
                form.degree()
            )));
        }
        let zeta = zeta.specialize(form.prime())?;
        level_masses(&form, SPEC_CHECK_DEPTH, Some(&zeta))?;
        Ok(OperatorSpec { form, beta, zeta })
    }

    /// Uses the closed-form zeta when available, else an exact fit.
    pub fn for_form(form: Form, beta: Real) -> Result<Self> {
        let zeta = zeta_for_form(&form)?;
        Self::new(form, beta, zeta)
    }

    fn q(&self) -> QSpec {
        QSpec::Prime(self.form.prime())
    }

    fn n(&self) -> i64 {
        self.form.dim() as i64
    }

    fn d(&self) -> i64 {
        self.form.degree() as i64
    }
}

/// `<|f|^a, Phi>` for `a` affine in the basis parameter: `sum_l c_l q^(-nl-dla) Z(a)`.
pub fn pair_form_power<B: PowerBasis>(
    b: &B,
    z: &RationalZeta,
    a: &Exponent,
    phi: &DeltaFunction,
) -> Result<B::K> {
    let zv = z.eval_at(b, a)?;
    let (n, d) = (z.dim() as i64, z.degree() as i64);
    let mut acc = B::K::zero();
    for (l, c) in phi.terms() {
        let e = a.scale(&int(-d * l)).plus(&int(-n * l));
        acc = acc.add_ref(&b.lift(c).mul_ref(&b.q_pow(&e)?));
    }
    Ok(acc.mul_ref(&zv))
}

/// The value of `f(D, beta) Phi` at a point, with a certified truncation bound.
#[derive(Clone, Debug)]
pub struct OperatorValue {
    pub value: BigComplex,
    /// `|exact - value| <= bound`.
    pub bound: f64,
    pub depth: u32,
}

/// Evaluates `F^-1(|f|^beta F Phi)(x)` from level sets `{v(f) = m}` with `m <= M`.
///
/// `F Phi = sum_j b_j W[j]`; each ball contributes
/// `b_j q^(-nj-djbeta) sum_m q^(-beta m) S_m(p^j x)` where `S_m(y)` is the
/// character sum of `Psi([y, .])` over `{v(f) = m}`, and the omitted levels
/// are bounded by `q^(-beta(M+1)) vol{v(f) > M}`.
pub fn apply_operator(
    spec: &OperatorSpec,
    phi: &DeltaFunction,
    x: &PAdicVector,
    depth: u32,
) -> Result<OperatorValue> {
    if depth < 1 {
        return Err(Error::invalid("operator depth must be at least 1"));
    }
    let f = &spec.form;
    let (p, n, d) = (f.prime(), spec.n(), spec.d());
    if phi.prime() != p || phi.dim() != f.dim() || x.prime() != p || x.dim() != f.dim() {
        return Err(Error::invalid("test function, point and form must share (p, n)"));
    }
    let masses = level_masses(f, depth, None)?;
    let tail = rational_to_f64(&masses.tail_volume());
    let beta = spec.beta.to_f64();
    let beta_c = match &spec.beta {
        Real::Rational(r) => <BigComplex as Field>::from_rational(r),
        Real::Float(b) => BigComplex::from_f64(*b, 0.0),
    };
    let qpow = |k: i64, c: i64| {
        // q^(k*beta + c)
        BigComplex::q_pow(
            p,
            &beta_c
                .mul_ref(&<BigComplex as Field>::from_int(k))
                .add_ref(&<BigComplex as Field>::from_int(c)),
        )
    };
    let xs: Vec<BigRational> = x.components().iter().map(|c| c.to_rational()).collect();
    let mut value = BigComplex::zero();
    let mut bound = 0.0f64;
    for (j, b) in phi.fourier().terms() {
        let y: Vec<BigRational> = xs
            .iter()
            .map(|xi| xi * crate::field::rat_pow(p, j))
            .collect();
        let sums = character_sums(f, &y, depth, &masses.masses)?;
        let mut inner = BigComplex::zero();
        for (m, s) in sums.iter().enumerate() {
            inner = inner.add_ref(&s.mul_ref(&qpow(-(m as i64), 0)));
        }
        let scale = qpow(-d * j, -n * j).mul_ref(&<BigComplex as Field>::from_rational(b));
        value = value.add_ref(&scale.mul_ref(&inner));
        bound += scale.abs_f64() * (p as f64).powf(-beta * (depth as f64 + 1.0)) * tail;
    }
    Ok(OperatorValue {
        value,
        bound: bound * (1.0 + 1e-12),
        depth,
    })
}

/// `S_m(y) = int_{v(f(e)) = m} Psi([y, e]) de` for `m <= M` over `Z_p^n`.
fn character_sums(
    f: &Form,
    y: &[BigRational],
    depth: u32,
    masses: &[BigRational],
) -> Result<Vec<BigComplex>> {
    let p = f.prime();
    let n = f.dim();
    let mut k = 0u32;
    for yi in y {
        if let Valuation::Finite(v) = valuation(yi, p)? {
            if v < 0 {
                k = k.max((-v) as u32);
            }
        }
    }
    if k == 0 {
        return Ok(masses
            .iter()
            .map(<BigComplex as Field>::from_rational)
            .collect());
    }
    let big_k = (depth + 1).max(k);
    check_budget(p, n as u64 * big_k as u64, budget())?;
    let modulus = p.pow(big_k);
    let cmod = p.pow(k);
    let a: Vec<u64> = y
        .iter()
        .map(|yi| {
            let fr = fractional_part(yi, p)?;
            let v = fr * BigRational::from_integer(cmod.into());
            v.to_integer()
                .to_u64()
                .ok_or_else(|| Error::Unsupported("character modulus too large".into()))
        })
        .collect::<Result<_>>()?;
    let ev = f.evaluator(modulus);
    let width = (depth as usize + 1) * cmod as usize;
    let counts: Vec<u64> = (0..modulus)
        .into_par_iter()
        .fold(
            || vec![0u64; width],
            |mut acc, e0| {
                let mut e = vec![0u64; n];
                e[0] = e0;
                loop {
                    let v = val(ev.eval(&e), p, big_k);
                    if v <= depth {
                        let r = e
                            .iter()
                            .zip(&a)
                            .fold(0u128, |s, (ei, ai)| (s + (*ei as u128 % cmod as u128) * *ai as u128) % cmod as u128);
                        acc[v as usize * cmod as usize + r as usize] += 1;
                    }
                    if !odometer(&mut e[1..], modulus) {
                        break;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; width],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let vol = <BigComplex as Field>::from_rational(&crate::field::rat_pow(p, -(n as i64 * big_k as i64)));
    let roots: Vec<BigComplex> = (0..cmod).map(|r| BigComplex::root_of_unity(r, cmod)).collect();
    Ok((0..=depth as usize)
        .map(|m| {
            let mut s = BigComplex::zero();
            for (r, root) in roots.iter().enumerate() {
                let c = counts[m * cmod as usize + r];
                if c > 0 {
                    s = s.add_ref(&root.mul_ref(&<BigComplex as Field>::from_int(c as i64)));
                }
            }
            s.mul_ref(&vol)
        })
        .collect())
}

/// Multiplicity data `(N_E, n_E)` of a resolution; candidate poles are `-n_E/N_E`.
#[derive(Clone, Debug, Default)]
pub struct ResolutionData {
    pairs: Vec<(u64, u64)>,
}

impl ResolutionData {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::invalid("numerical data must be positive integers"));
        }
        Ok(ResolutionData { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn candidate_poles(&self) -> Vec<BigRational> {
        self.pairs
            .iter()
            .map(|&(big, small)| BigRational::new((-(small as i64)).into(), (big as i64).into()))
            .collect()
    }
}

/// Which hypotheses of the fundamental-solution construction hold.
#[derive(Clone, Debug)]
pub struct AdmissibilityRecord {
    pub beta_positive: bool,
    pub beta_not_n_over_d: bool,
    pub no_pole_at_minus_beta: bool,
    pub zeta_nonzero_at_minus_beta: bool,
    /// Present only when resolution data was supplied.
    pub avoids_resolution_candidates: Option<bool>,
    /// `<E, F W[l]> - ((1-q^(dbeta-n))/(1-q^-n)) Z(-beta) <||x||^(-dbeta), W[l]>` for `l = -1, 0, 1`.
    pub fourier_residuals: Vec<Value>,
}

impl AdmissibilityRecord {
    pub fn admissible(&self) -> bool {
        self.beta_positive
            && self.beta_not_n_over_d
            && self.no_pole_at_minus_beta
            && self.zeta_nonzero_at_minus_beta
            && self.avoids_resolution_candidates.unwrap_or(true)
    }
}

/// `E_beta = coefficient * ||x||^exponent`.
#[derive(Clone, Debug)]
pub struct FundamentalSolution {
    pub n: usize,
    pub d: u32,
    pub p: u64,
    pub beta: Real,
    pub coefficient: Value,
    /// `d*beta - n`.
    pub exponent: Real,
    pub checks: AdmissibilityRecord,
}

struct FundamentalTask<'a> {
    spec: &'a OperatorSpec,
}

/// Result of the fundamental-solution task: coefficient, `Z(-beta)` status and Fourier residuals.
type FundamentalOut = (std::result::Result<Value, String>, bool, Vec<Value>);

impl Task for FundamentalTask<'_> {
    type Out = FundamentalOut;
    // The basis parameter is sigma = -beta.
    fn run<B: PowerBasis>(&self, b: &B) -> Result<FundamentalOut> {
        let (n, d) = (self.spec.n(), self.spec.d());
        let zv = match self.spec.zeta.eval_at(b, &Exponent::sigma()) {
            Ok(v) => v,
            Err(Error::Pole { factor }) => return Ok((Err(factor), false, vec![])),
            Err(e) => return Err(e),
        };
        let zero = zv.vanishes();
        let shell = b.one_minus(&Exponent::constant(int(-n)))?;
        let coef = b
            .one_minus(&Exponent::param(int(d)))?
            .mul_ref(&zv)
            .div_ref(&shell)
            .ok_or_else(|| Error::pole("1 - q^-n"))?;
        let mut residuals = Vec::new();
        if !zero {
            let e_exp = Exponent::new(int(-d), int(-n));
            let t0 = b
                .one_minus(&Exponent::new(int(-d), int(-n)))?
                .mul_ref(&zv)
                .div_ref(&shell)
                .ok_or_else(|| Error::pole("1 - q^-n"))?;
            for l in -1..=1 {
                let phi = DeltaFunction::ball(self.spec.form.prime(), n as usize, l);
                let lhs = coef.mul_ref(&pair_radial(b, &e_exp, &phi.fourier(), true, "beta")?);
                let rhs = t0.mul_ref(&pair_radial(b, &Exponent::param(int(d)), &phi, true, "beta")?);
                residuals.push(lhs.sub_ref(&rhs).to_value());
            }
        }
        Ok((Ok(coef.to_value()), !zero, residuals))
    }
}

/// `E_beta = ((1-q^(-d beta))/(1-q^-n)) Z(-beta) ||x||^(d beta - n)` with every hypothesis recorded.
pub fn fundamental_solution(
    spec: &OperatorSpec,
    resolution: Option<&ResolutionData>,
) -> Result<FundamentalSolution> {
    let (n, d) = (spec.n(), spec.d());
    let beta = &spec.beta;
    let n_over_d = BigRational::new(n.into(), d.into());
    let out = dispatch(spec.q(), &beta.neg().as_sample(), &FundamentalTask { spec })?;
    let (coef, nonzero, residuals) = out;
    let mut reasons = Vec::new();
    if let Err(factor) = &coef {
        reasons.push(Inadmissible::PoleAtMinusBeta {
            beta: beta.to_string(),
            factor: factor.clone(),
        });
    }
    let not_n_over_d = !beta.equals(&n_over_d);
    if !not_n_over_d {
        reasons.push(Inadmissible::BetaIsNOverD {
            n: n as usize,
            d: d as u32,
        });
    }
    let zeta_nonzero = coef.is_err() || nonzero;
    if !zeta_nonzero {
        reasons.push(Inadmissible::ZetaVanishes);
    }
    let resolution_ok = resolution.map(|r| {
        for (c, &(big, small)) in r.candidate_poles().iter().zip(r.pairs()) {
            if beta.neg().equals(c) {
                reasons.push(Inadmissible::ResolutionCandidate { big_n: big, small_n: small });
                return false;
            }
        }
        true
    });
    if !reasons.is_empty() {
        return Err(Error::Inadmissible(reasons));
    }
    Ok(FundamentalSolution {
        n: n as usize,
        d: d as u32,
        p: spec.form.prime(),
        beta: beta.clone(),
        coefficient: coef.expect("checked"),
        exponent: beta.affine(d, -n),
        checks: AdmissibilityRecord {
            beta_positive: true,
            beta_not_n_over_d: not_n_over_d,
            no_pole_at_minus_beta: true,
            zeta_nonzero_at_minus_beta: zeta_nonzero,
            avoids_resolution_candidates: resolution_ok,
            fourier_residuals: residuals,
        },
    })
}

struct EllipticTask(i64);

impl Task for EllipticTask {
    type Out = Value;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        // sigma = -beta: (1 - q^(2 sigma)) / (1 - q^(-n - 2 sigma)).
        let num = b.one_minus(&Exponent::param(int(2)))?;
        let den = b.one_minus(&Exponent::new(int(-2), int(-self.0)))?;
        Ok(num
            .div_ref(&den)
            .ok_or_else(|| Error::pole("1 - q^(2*beta-n)"))?
            .to_value())
    }
}

/// `((1-p^(-2 beta))/(1-p^(2 beta - n))) ||x||^(2 beta - n)` for anisotropic quadratic forms.
pub fn elliptic_fundamental_solution(n: usize, beta: &Real, p: u64) -> Result<FundamentalSolution> {
    if !(2..=4).contains(&n) {
        return Err(Error::invalid(format!("n must be in 2..=4, got {n}")));
    }
    crate::padic::require_prime(p)?;
    if p == 2 {
        return Err(Error::Unsupported("elliptic fundamental solution needs p odd".into()));
    }
    if beta.to_f64() <= 0.0 {
        return Err(Error::Inadmissible(vec![Inadmissible::NonPositiveBeta]));
    }
    if beta.equals(&BigRational::new((n as i64).into(), 2.into())) {
        return Err(Error::Inadmissible(vec![Inadmissible::BetaIsNOverD { n, d: 2 }]));
    }
    let coefficient = dispatch(QSpec::Prime(p), &beta.neg().as_sample(), &EllipticTask(n as i64))?;
    Ok(FundamentalSolution {
        n,
        d: 2,
        p,
        beta: beta.clone(),
        coefficient,
        exponent: beta.affine(2, -(n as i64)),
        checks: AdmissibilityRecord {
            beta_positive: true,
            beta_not_n_over_d: true,
            no_pole_at_minus_beta: true,
            zeta_nonzero_at_minus_beta: true,
            avoids_resolution_candidates: None,
            fourier_residuals: Vec::new(),
        },
    })
}

struct ShiftTask<'a> {
    spec: &'a OperatorSpec,
    level: i64,
}

impl Task for ShiftTask<'_> {
    type Out = Value;
    // sigma = -beta; the shifted argument s + beta vanishes there.
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        let z = &self.spec.zeta;
        if let Err(e) = z.eval_at(b, &Exponent::sigma()) {
            return Err(match e {
                Error::Pole { factor } => Error::Inadmissible(vec![Inadmissible::PoleAtMinusBeta {
                    beta: self.spec.beta.to_string(),
                    factor,
                }]),
                e => e,
            });
        }
        let shifted = match &self.spec.beta {
            Real::Rational(r) => Exponent::sigma().plus(r),
            Real::Float(_) => Exponent::constant(int(0)),
        };
        let phi = DeltaFunction::ball(self.spec.form.prime(), self.spec.form.dim(), self.level);
        let v = pair_form_power(b, z, &shifted, &phi)?;
        Ok(v.sub_ref(&b.lift(&phi.integrate())).to_value())
    }
}

/// `<|f|^(s+beta), W[l]>` at `s = -beta`, minus `integrate(W[l])`; zero when the
/// limit `|f|^beta T_0 = 1` holds on the ball.
pub fn holomorphy_shift_check(spec: &OperatorSpec, level: i64) -> Result<Value> {
    dispatch(spec.q(), &spec.beta.neg().as_sample(), &ShiftTask { spec, level })
}

/// A residual at one sample point, or the reason the sample was skipped.
#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub sample: Sample,
    pub outcome: std::result::Result<Value, String>,
}

impl SampleCheck {
    fn from(sample: &Sample, r: Result<Value>) -> Result<Self> {
        let outcome = match r {
            Ok(v) => Ok(v),
            Err(e @ (Error::Pole { .. } | Error::Divergent(_))) => Err(e.to_string()),
            Err(e) => return Err(e),
        };
        Ok(SampleCheck {
            sample: sample.clone(),
            outcome,
        })
    }

    /// Passes when skipped or when the residual is below `tol` (exact zero for exact values).
    pub fn passes(&self, tol: f64) -> bool {
        match &self.outcome {
            Err(_) => true,
            Ok(v) if v.is_exact() => v.is_zero(),
            Ok(Value::Symbolic { zero, .. }) => *zero,
            Ok(v) => v.abs_f64().is_some_and(|a| a < tol),
        }
    }
}

struct FunctionalTask<'a> {
    spec: &'a OperatorSpec,
    level: i64,
}

impl Task for FunctionalTask<'_> {
    type Out = Value;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        let z = &self.spec.zeta;
        let (n, d) = (self.spec.n(), self.spec.d());
        let s = Exponent::sigma();
        let dual = s.neg().plus(&BigRational::new((-n).into(), d.into()));
        let phi = DeltaFunction::ball(self.spec.form.prime(), n as usize, self.level);
        let lhs = pair_form_power(b, z, &s, &phi)?;
        let zs = z.eval_at(b, &s)?;
        let zd = z.eval_at(b, &dual)?;
        if zd.vanishes() {
            return Err(Error::pole(format!("Z({}) = 0", dual.render(VAR))));
        }
        let rhs = zs
            .div_ref(&zd)
            .expect("nonzero")
            .mul_ref(&pair_form_power(b, z, &dual, &phi.fourier())?);
        Ok(lhs.sub_ref(&rhs).to_value())
    }
}

/// `<|f|^s, W[l]> - (Z(s)/Z(-s-n/d)) <|f|^(-s-n/d), F W[l]>` at each sample.
pub fn functional_equation_check(
    spec: &OperatorSpec,
    level: i64,
    samples: &[Sample],
) -> Result<Vec<SampleCheck>> {
    let q = spec.zeta.q();
    samples
        .iter()
        .map(|s| SampleCheck::from(s, dispatch(q, s, &FunctionalTask { spec, level })))
        .collect()
}

struct Lemma1Task<'a> {
    spec: &'a OperatorSpec,
    phi: &'a DeltaFunction,
}

impl Task for Lemma1Task<'_> {
    type Out = Value;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<Value> {
        let z = &self.spec.zeta;
        let (n, d) = (self.spec.n(), self.spec.d());
        let s = Exponent::sigma();
        let lhs = pair_form_power(b, z, &s, self.phi)?;
        let radial = pair_radial(b, &Exponent::param(int(d)), self.phi, true, VAR)?;
        let factor = b
            .one_minus(&Exponent::new(int(-d), int(-n)))?
            .div_ref(&b.one_minus(&Exponent::constant(int(-n)))?)
            .expect("q^-n != 1");
        let rhs = factor.mul_ref(&z.eval_at(b, &s)?).mul_ref(&radial);
        Ok(lhs.sub_ref(&rhs).to_value())
    }
}

/// `<|f|^s, Phi> - ((1-q^(-n-ds))/(1-q^-n)) Z(s) <||x||^(ds), Phi>` at each sample.
pub fn lemma1_check(spec: &OperatorSpec, phi: &DeltaFunction, samples: &[Sample]) -> Result<Vec<SampleCheck>> {
    if phi.dim() != spec.form.dim() || phi.prime() != spec.form.prime() {
        return Err(Error::invalid("test function must share (p, n) with the form"));
    }
    let q = spec.zeta.q();
    samples
        .iter()
        .map(|s| SampleCheck::from(s, dispatch(q, s, &Lemma1Task { spec, phi })))
        .collect()
}

/// Growth of `E_beta` near the origin and at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Asymptotics {
    /// `E(x) = O(||x||^(d beta - n))` as `x -> 0`.
    pub origin_exponent: Real,
    /// `<E, F W[l]> = O(q^(-l d beta))`-type decay, i.e. `O(||x||^(-d beta))` at infinity.
    pub infinity_exponent: Real,
    /// `beta > n/d`.
    pub nonsingular_at_origin: bool,
}

pub fn asymptotics_report(e: &FundamentalSolution) -> Asymptotics {
    let n_over_d = e.n as f64 / e.d as f64;
    let nonsingular = match &e.beta {
        Real::Rational(b) => *b > BigRational::new((e.n as i64).into(), (e.d as i64).into()),
        Real::Float(b) => *b > n_over_d,
    };
    Asymptotics {
        origin_exponent: e.exponent.clone(),
        infinity_exponent: e.beta.affine(-(e.d as i64), 0),
        nonsingular_at_origin: nonsingular,
    }
}

/// Default complex sample points for the numeric identity checks.
pub fn complex_samples(count: usize) -> Vec<Sample> {
    (0..count)
        .map(|i| {
            let re = 0.35 + 0.173 * i as f64;
            let im = 0.3 + 0.611 * ((i * 7) % 11) as f64 / 11.0;
            Sample::Complex(BigComplex::from_f64(re, im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::catalog_anisotropic;
    use crate::field::rat;

    fn spec(t: &str, n: usize, p: u64, beta: BigRational) -> OperatorSpec {
        OperatorSpec::for_form(Form::parse(t, n, p).unwrap(), Real::Rational(beta)).unwrap()
    }

    fn exact(v: &Value) -> BigRational {
        match v {
            Value::Exact(r) => r.as_rational().expect("rational"),
            other => panic!("not exact: {other}"),
        }
    }

    #[test]
    fn operator_values_on_sum_of_squares() {
        let s = spec("x1^2 + x2^2", 2, 3, int(1));
        let phi = DeltaFunction::ball(3, 2, 0);
        let inside = PAdicVector::from_ints(&[1, 2], 3).unwrap();
        let v = apply_operator(&s, &phi, &inside, 6).unwrap();
        assert!(v.bound < 1e-3);
        assert!((v.value.re_f64() - 0.9).abs() <= v.bound);
        let outside = PAdicVector::from_rationals(&[rat(1, 3), int(0)], 3, 12).unwrap();
        let w = apply_operator(&s, &phi, &outside, 4).unwrap();
        assert!((w.value.re_f64() + 0.1).abs() <= w.bound, "{}", w.value);
        assert!(w.value.im_f64().abs() < 1e-30);
        let zero = DeltaFunction::zero(3, 2);
        let z = apply_operator(&s, &zero, &outside, 3).unwrap();
        assert_eq!(z.bound, 0.0);
        assert!(z.value.is_zero());
    }

    #[test]
    fn bounds_shrink_with_depth() {
        let s = spec("x1*x2", 2, 3, rat(1, 2));
        let phi = DeltaFunction::ball(3, 2, 0);
        let x = PAdicVector::from_ints(&[0, 0], 3).unwrap();
        let b: Vec<f64> = (1..=5).map(|m| apply_operator(&s, &phi, &x, m).unwrap().bound).collect();
        for w in b.windows(2) {
            assert!(w[1] <= w[0] * 3f64.powf(-0.5) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn holomorphy_examples() {
        let e = spec("x1^2 + x2^2", 2, 3, int(1));
        // Z has its pole at s = -1 = -beta.
        assert!(matches!(holomorphy_shift_check(&e, 0), Err(Error::Inadmissible(_))));
        let h = spec("x1*x2", 2, 3, rat(1, 2));
        assert!(holomorphy_shift_check(&h, 1).unwrap().is_zero());
        let bad = spec("x1*x2", 2, 3, int(1));
        match holomorphy_shift_check(&bad, 0) {
            Err(Error::Inadmissible(r)) => {
                assert!(matches!(r[0], Inadmissible::PoleAtMinusBeta { .. }))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fundamental_solution_examples() {
        let s = spec("x1^2 + x2^2", 2, 3, int(2));
        let e = fundamental_solution(&s, None).unwrap();
        let el = elliptic_fundamental_solution(2, &Real::Rational(int(2)), 3).unwrap();
        assert_eq!(exact(&e.coefficient), exact(&el.coefficient));
        assert_eq!(exact(&el.coefficient), rat(80, 81) / int(-8));
        assert!(e.checks.fourier_residuals.iter().all(|r| r.is_zero()));
        let el3 = elliptic_fundamental_solution(3, &Real::Rational(int(1)), 5).unwrap();
        assert_eq!(exact(&el3.coefficient), rat(6, 5));
        match fundamental_solution(&spec("x1*x2", 2, 3, int(1)), None) {
            Err(e @ Error::Inadmissible(_)) => assert!(e.to_string().contains("pole of Z at s=-1")),
            other => panic!("{other:?}"),
        }
        match fundamental_solution(&spec("x1^2 + x2^2", 2, 3, int(1)), None) {
            Err(e @ Error::Inadmissible(_)) => assert!(e.to_string().contains("beta = n/d")),
            other => panic!("{other:?}"),
        }
        let r = ResolutionData::new(vec![(2, 3)]).unwrap();
        let s = spec("x1^2 + x2^2", 2, 3, rat(3, 2));
        assert!(matches!(
            fundamental_solution(&s, Some(&r)),
            Err(Error::Inadmissible(ref v)) if matches!(v[..], [Inadmissible::ResolutionCandidate { .. }])
        ));
    }

    #[test]
    fn half_integer_beta_stays_exact() {
        let s = spec("x1*x2", 2, 5, rat(1, 2));
        let e = fundamental_solution(&s, None).unwrap();
        assert!(e.coefficient.is_exact());
        assert!(e.checks.fourier_residuals.iter().all(|r| r.is_zero()));
        assert_eq!(e.exponent, Real::Rational(int(-1)));
    }

    #[test]
    fn lemma1_examples() {
        let e = spec("x1^2 + x2^2", 2, 3, int(1));
        let phi = DeltaFunction::parse("1*W[2] - 2*W[-1]", 3, 2).unwrap();
        let r = lemma1_check(&e, &phi, &[Sample::Rational(int(1)), Sample::Symbolic]).unwrap();
        assert!(r.iter().all(|c| c.passes(0.0)), "{r:?}");
        let c = spec("x1^3 + x2^3", 2, 7, int(1));
        let r = lemma1_check(&c, &DeltaFunction::ball(7, 2, 1), &[Sample::Rational(int(2))]).unwrap();
        assert!(r[0].outcome.as_ref().unwrap().is_zero());
        let r = lemma1_check(&c, &DeltaFunction::ball(7, 2, 1), &complex_samples(3)).unwrap();
        assert!(r.iter().all(|c| c.passes(1e-25)), "{r:?}");
    }

    #[test]
    fn functional_equation_examples() {
        let e = spec("x1^2 + x2^2", 2, 3, int(1));
        let r = functional_equation_check(&e, 0, &[Sample::Symbolic, Sample::Rational(rat(1, 3))]).unwrap();
        assert!(r.iter().all(|c| c.passes(0.0)), "{r:?}");
        let h = spec("x1*x2", 2, 3, int(1));
        let r = functional_equation_check(&h, 1, &[Sample::Complex(BigComplex::from_f64(0.7, 0.3))]).unwrap();
        assert!(r[0].passes(1e-25));
        // s = -1 hits the pole of Z(s) for x1*x2 and is skipped.
        let r = functional_equation_check(&h, 1, &[Sample::Rational(int(-1))]).unwrap();
        assert!(r[0].outcome.is_err());
    }

    #[test]
    fn asymptotics_examples() {
        let el = elliptic_fundamental_solution(3, &Real::Rational(int(1)), 3).unwrap();
        let a = asymptotics_report(&el);
        assert_eq!(a.origin_exponent, Real::Rational(int(-1)));
        assert!(!a.nonsingular_at_origin);
        let el = elliptic_fundamental_solution(2, &Real::Rational(int(2)), 3).unwrap();
        let a = asymptotics_report(&el);
        assert_eq!(a.origin_exponent, Real::Rational(int(2)));
        assert_eq!(a.infinity_exponent, Real::Rational(int(-4)));
        assert!(a.nonsingular_at_origin);
    }

    #[test]
    fn catalog_forms_build_operators() {
        for f in catalog_anisotropic(3, 3).unwrap() {
            let s = OperatorSpec::for_form(f, Real::Rational(int(1))).unwrap();
            assert!(fundamental_solution(&s, None).is_ok());
        }
    }
}
