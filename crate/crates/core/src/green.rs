//! Pairings of the Green function `G_lambda` of `f(D, beta) + lambda` against balls
//! around infinity, and their expansion in powers of `1/lambda`.
//!
//! With `x = q^(-l d beta) |f|^beta`, fiber integration gives
//! `<G_lambda, W[-l]> = sum_m a_m / (q^(-l d beta - beta m) + lambda)` where `a_m` is the
//! mass of `{v(f) = m}`; expanding `1/(x + lambda)` yields the paired partial sums
//! `P(l, M) = sum_{m <= M} (-1)^m q^(-l d beta m) Z(beta m) / lambda^(m+1)`.

use num::{BigRational, FromPrimitive, Signed};

use crate::error::{Error, Result};
use crate::field::{int, rational_to_f64, Field};
use crate::numeric::{big_to_f64, BigComplex};
use crate::pdo::{OperatorSpec, Real};
use crate::powers::{dispatch, Exponent, IntoValue, PowerBasis, Sample, Task, Value};

/// Longest level-mass series summed before giving up on a precision target.
pub const MAX_TERMS: usize = 8192;

/// Default certified precision of [`green_pair_exact`].
pub const DEFAULT_EPS: f64 = 1e-60;

/// `f(D, beta) + lambda` with `lambda > 0`.
#[derive(Clone, Debug)]
pub struct GreenSpec {
    pub operator: OperatorSpec,
    pub lambda: Real,
    lambda_q: BigRational,
}

impl GreenSpec {
    pub fn new(operator: OperatorSpec, lambda: Real) -> Result<Self> {
        let lambda_q = match &lambda {
            Real::Rational(r) => r.clone(),
            Real::Float(x) => BigRational::from_f64(*x)
                .ok_or_else(|| Error::invalid("lambda must be finite"))?,
        };
        if !lambda_q.is_positive() {
            return Err(Error::invalid("lambda must be positive"));
        }
        Ok(GreenSpec {
            operator,
            lambda,
            lambda_q,
        })
    }

    fn prime(&self) -> u64 {
        self.operator.form.prime()
    }

    fn d(&self) -> i64 {
        self.operator.form.degree() as i64
    }

    fn beta_sample(&self) -> Sample {
        match &self.operator.beta {
            Real::Rational(r) => Sample::Rational(r.clone()),
            Real::Float(x) => Sample::Complex(BigComplex::from_f64(*x, 0.0)),
        }
    }

    fn beta_big(&self) -> BigComplex {
        match &self.operator.beta {
            Real::Rational(r) => <BigComplex as Field>::from_rational(r),
            Real::Float(x) => BigComplex::from_f64(*x, 0.0),
        }
    }

    /// `q^(-l d beta) < lambda`, which makes the expansion in `1/lambda` converge.
    pub fn expansion_converges(&self, l: i64) -> bool {
        let x = (self.prime() as f64).powf(-(l * self.d()) as f64 * self.operator.beta.to_f64());
        x < rational_to_f64(&self.lambda_q)
    }

    fn guard(&self, l: i64) -> Result<()> {
        if self.expansion_converges(l) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "q^(-l*d*beta) >= lambda at l = {l}; the expansion in 1/lambda needs q^(-l*d*beta) < lambda"
            )))
        }
    }
}

/// A pairing summed to a certified accuracy.
#[derive(Clone, Debug)]
pub struct GreenValue {
    pub value: BigComplex,
    /// `|exact - value| <= bound`.
    pub bound: f64,
    pub terms: usize,
}

/// `<G_lambda, W[-l]>` from the level masses, summed until the residual mass over `lambda` is below `eps`.
pub fn green_pair_exact(spec: &GreenSpec, l: i64, eps: f64) -> Result<GreenValue> {
    if l < 0 {
        return Err(Error::invalid("level must be nonnegative"));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::invalid("precision must be positive"));
    }
    let lambda = rational_to_f64(&spec.lambda_q);
    let mut len = 64;
    let masses = loop {
        let a = spec.operator.zeta.masses(len)?;
        let residual = BigRational::one() - a.iter().fold(BigRational::zero(), |s, m| s + m);
        let bound = rational_to_f64(&residual) / lambda;
        if bound < eps {
            break (a, bound);
        }
        if len >= MAX_TERMS {
            return Err(Error::Precision(format!(
                "residual mass bound {bound:e} after {len} levels exceeds {eps:e}"
            )));
        }
        len *= 2;
    };
    let (a, bound) = masses;
    let p = spec.prime();
    let beta = spec.beta_big();
    let lam = <BigComplex as Field>::from_rational(&spec.lambda_q);
    let mut sum = BigComplex::zero();
    for (m, am) in a.iter().enumerate() {
        if am.is_zero() {
            continue;
        }
        let e = beta.mul_ref(&<BigComplex as Field>::from_int(-(l * spec.d() + m as i64)));
        let den = BigComplex::q_pow(p, &e).add_ref(&lam);
        let term = <BigComplex as Field>::from_rational(am)
            .div_ref(&den)
            .expect("positive denominator");
        sum = sum.add_ref(&term);
    }
    Ok(GreenValue {
        value: BigComplex::real(sum.re().clone()),
        bound,
        terms: a.len(),
    })
}

/// One radial term `coefficient * ||x||^radial_exponent` of the expansion.
#[derive(Clone, Debug)]
pub struct ExpansionTerm {
    pub m: u32,
    /// `(-1)^m (1 - q^(d beta m)) Z(beta m) / ((1 - q^-n) lambda^(m+1))`.
    pub coefficient: Value,
    /// `-d beta m - n`.
    pub radial_exponent: Real,
    /// `Z(beta m)`.
    pub zeta: Value,
}

#[derive(Clone, Debug)]
pub struct GreenExpansion {
    pub depth: u32,
    /// `1/lambda`, the contribution of the delta at the origin.
    pub delta_term: Value,
    pub terms: Vec<ExpansionTerm>,
}

struct ExpansionTask<'a> {
    spec: &'a GreenSpec,
    depth: u32,
}

impl Task for ExpansionTask<'_> {
    type Out = GreenExpansion;
    // sigma = beta.
    fn run<B: PowerBasis>(&self, b: &B) -> Result<GreenExpansion> {
        let op = &self.spec.operator;
        let (n, d) = (op.form.dim() as i64, self.spec.d());
        let inv = BigRational::one() / &self.spec.lambda_q;
        let shell = b.one_minus(&Exponent::constant(int(-n)))?;
        let mut terms = Vec::new();
        for m in 1..=self.depth as i64 {
            let z = op.zeta.eval_at(b, &Exponent::param(int(m)))?;
            let mut scale = b.lift(&num::pow(inv.clone(), m as usize + 1));
            if m % 2 == 1 {
                scale = scale.neg_ref();
            }
            let coefficient = b
                .one_minus(&Exponent::param(int(d * m)))?
                .mul_ref(&z)
                .mul_ref(&scale)
                .div_ref(&shell)
                .ok_or_else(|| Error::pole("1 - q^-n"))?;
            terms.push(ExpansionTerm {
                m: m as u32,
                coefficient: coefficient.to_value(),
                radial_exponent: op.beta.affine(-d * m, -n),
                zeta: z.to_value(),
            });
        }
        Ok(GreenExpansion {
            depth: self.depth,
            delta_term: b.lift(&inv).to_value(),
            terms,
        })
    }
}

/// Coefficients of the radial expansion of `G_lambda` up to order `depth`.
pub fn green_expansion(spec: &GreenSpec, depth: u32) -> Result<GreenExpansion> {
    dispatch(spec.operator.zeta.q(), &spec.beta_sample(), &ExpansionTask { spec, depth })
}

/// `P(l, M)` and the bound `R(l, M) = q^(-l d beta (M+1)) Z(beta (M+1)) / lambda^(M+2)`.
#[derive(Clone, Debug)]
pub struct PairedPartial {
    pub level: i64,
    pub depth: u32,
    pub value: Value,
    pub bound: Value,
}

struct PartialTask<'a> {
    spec: &'a GreenSpec,
    level: i64,
    depth: u32,
}

impl Task for PartialTask<'_> {
    type Out = PairedPartial;
    fn run<B: PowerBasis>(&self, b: &B) -> Result<PairedPartial> {
        let z = &self.spec.operator.zeta;
        let ld = self.level * self.spec.d();
        let inv = BigRational::one() / &self.spec.lambda_q;
        let term = |m: i64| -> Result<B::K> {
            let zm = if m == 0 {
                B::K::one()
            } else {
                z.eval_at(b, &Exponent::param(int(m)))?
            };
            Ok(b.q_pow(&Exponent::param(int(-ld * m)))?
                .mul_ref(&zm)
                .mul_ref(&b.lift(&num::pow(inv.clone(), m as usize + 1))))
        };
        let mut acc = B::K::zero();
        for m in 0..=self.depth as i64 {
            let t = term(m)?;
            acc = if m % 2 == 0 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
        }
        Ok(PairedPartial {
            level: self.level,
            depth: self.depth,
            value: acc.to_value(),
            bound: term(self.depth as i64 + 1)?.to_value(),
        })
    }
}

/// `P(l, M)`, the paired partial sum through order `M` including the `1/lambda` term.
pub fn paired_partial(spec: &GreenSpec, level: i64, depth: u32) -> Result<PairedPartial> {
    spec.guard(level)?;
    dispatch(
        spec.operator.zeta.q(),
        &spec.beta_sample(),
        &PartialTask { spec, level, depth },
    )
}

#[derive(Clone, Debug)]
pub struct RemainderRow {
    pub level: i64,
    pub depth: u32,
    pub partial: Value,
    /// `|exact - P(l, M)|`.
    pub remainder: f64,
    pub bound: f64,
    pub within: bool,
}

#[derive(Clone, Debug)]
pub struct RemainderTable {
    pub exact: Vec<(i64, GreenValue)>,
    pub rows: Vec<RemainderRow>,
    /// Least-squares decay exponent in `l` of the remainder, per depth `M`.
    pub decay: Vec<(u32, f64)>,
}

impl RemainderTable {
    pub fn all_within(&self) -> bool {
        self.rows.iter().all(|r| r.within)
    }
}

/// Compares exact pairings with `P(l, M)` over a grid and fits the decay of the remainder in `l`.
pub fn remainder_diagnostic(spec: &GreenSpec, levels: &[i64], depths: &[u32]) -> Result<RemainderTable> {
    for &l in levels {
        spec.guard(l)?;
    }
    let q = spec.prime() as f64;
    let exact: Vec<(i64, GreenValue)> = levels
        .iter()
        .map(|&l| Ok((l, green_pair_exact(spec, l, DEFAULT_EPS)?)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut decay = Vec::new();
    for &m in depths {
        let mut pts = Vec::new();
        for (l, ev) in &exact {
            let pp = paired_partial(spec, *l, m)?;
            let pv = pp.value.to_complex().expect("numeric partial");
            let remainder = big_to_f64(&ev.value.sub_ref(&pv).abs());
            let bound = pp.bound.abs_f64().expect("numeric bound");
            let within = remainder <= bound * (1.0 + 1e-12) + ev.bound;
            if remainder > 0.0 {
                pts.push((*l as f64, remainder.ln() / q.ln()));
            }
            rows.push(RemainderRow {
                level: *l,
                depth: m,
                partial: pp.value,
                remainder,
                bound,
                within,
            });
        }
        if pts.len() >= 2 {
            decay.push((m, -slope(&pts)));
        }
    }
    Ok(RemainderTable { exact, rows, decay })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
