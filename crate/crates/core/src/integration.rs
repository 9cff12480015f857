//! `(p,q)`-antiderivatives and Jackson-type `(p,q)`-integrals.
//!
//! Every definite integral is a series over a geometric lattice. With `big`
//! the larger of `|p|, |q|` and `small` the other one,
//!
//! ```text
//! ∫_0^a f d_{p,q}x = (big - small) a Σ_{k>=0} small^k / big^{k+1} · f(a small^k / big^{k+1})
//! ```
//!
//! which is the textbook formula for `|q/p| < 1` and its mirror image for
//! `|q/p| > 1`. At `p = 1` it is exactly the Jackson integral. Series are
//! truncated by a [`TruncationPolicy`]; divergence is reported through
//! [`SeriesStatus`] rather than as an error.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{PqError, Result};
use crate::polynomials::{pq_derive_poly, NumericFn, Polynomial};
use crate::scalars::{bracket, rpow, PqParams, Rational, Regime};

/// How far to push a series and when to give up on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    /// Absolute bound on the magnitude of the last included term.
    pub tail_tol: f64,
    /// Number of consecutive non-decreasing term magnitudes that counts as divergence.
    pub divergence_window: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            tail_tol: 1e-12,
            divergence_window: 8,
        }
    }
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, tail_tol: f64, divergence_window: usize) -> Result<Self> {
        let policy = Self {
            max_terms,
            tail_tol,
            divergence_window,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(PqError::InvalidPolicy(
                "max_terms must be at least 1".into(),
            ));
        }
        if self.tail_tol.is_nan() || self.tail_tol <= 0.0 {
            return Err(PqError::InvalidPolicy("tail_tol must be positive".into()));
        }
        if self.divergence_window < 2 {
            return Err(PqError::InvalidPolicy(
                "divergence_window must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SeriesStatus {
    #[serde(rename = "converged")]
    Converged,
    #[serde(rename = "max_terms")]
    MaxTermsReached,
    #[serde(rename = "divergent")]
    DivergenceDetected,
}

impl SeriesStatus {
    /// The less favourable of two outcomes.
    pub fn worst(self, other: Self) -> Self {
        self.max(other)
    }
}

/// Outcome of summing one truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub status: SeriesStatus,
}

/// Consecutive sub-tolerance terms required before a series is called converged.
/// A single small term can be a zero of the integrand on the lattice.
const CONVERGENCE_RUN: usize = 3;

/// Relative slack in the non-decreasing test, so rounding noise cannot break a
/// run of equal-magnitude terms.
const RISING_SLACK: f64 = 1e-9;

/// Sums `terms` under `policy`.
///
/// Stops as `Converged` after [`CONVERGENCE_RUN`] consecutive terms at or below
/// `tail_tol`, as `DivergenceDetected` once `divergence_window` consecutive terms
/// fail to decrease in magnitude (or a term is not finite), and as
/// `MaxTermsReached` otherwise. The tail estimate is the magnitude of the
/// last included term.
pub fn sum_series(terms: impl IntoIterator<Item = f64>, policy: &TruncationPolicy) -> SeriesSum {
    let mut value = 0.0;
    let mut used = 0;
    let mut last = 0.0f64;
    let mut small_run = 0;
    let mut rising_run = 0;
    for t in terms.into_iter().take(policy.max_terms) {
        if !t.is_finite() {
            return SeriesSum {
                value,
                terms_used: used,
                tail_estimate: f64::INFINITY,
                status: SeriesStatus::DivergenceDetected,
            };
        }
        let mag = t.abs();
        value += t;
        used += 1;
        if mag <= policy.tail_tol {
            small_run += 1;
            rising_run = 0;
        } else {
            small_run = 0;
            if used > 1 && mag >= last * (1.0 - RISING_SLACK) {
                rising_run += 1;
            } else {
                rising_run = 0;
            }
        }
        last = mag;
        if small_run >= CONVERGENCE_RUN {
            return SeriesSum {
                value,
                terms_used: used,
                tail_estimate: mag,
                status: SeriesStatus::Converged,
            };
        }
        if rising_run >= policy.divergence_window {
            return SeriesSum {
                value,
                terms_used: used,
                tail_estimate: mag,
                status: SeriesStatus::DivergenceDetected,
            };
        }
    }
    let status = if used < policy.max_terms {
        // finite iterator ran out
        SeriesStatus::Converged
    } else {
        SeriesStatus::MaxTermsReached
    };
    SeriesSum {
        value,
        terms_used: used,
        tail_estimate: if status == SeriesStatus::Converged {
            0.0
        } else {
            last
        },
        status,
    }
}

/// A truncated `(p,q)`-integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    #[serde(rename = "terms")]
    pub terms_used: usize,
    #[serde(rename = "tail")]
    pub tail_estimate: f64,
    pub status: SeriesStatus,
    pub regime: Regime,
}

impl IntegralResult {
    fn from_sum(sum: SeriesSum, regime: Regime) -> Self {
        Self {
            value: sum.value,
            terms_used: sum.terms_used,
            tail_estimate: sum.tail_estimate,
            status: sum.status,
            regime,
        }
    }

    fn zero(regime: Regime) -> Self {
        Self {
            value: 0.0,
            terms_used: 0,
            tail_estimate: 0.0,
            status: SeriesStatus::Converged,
            regime,
        }
    }

    /// `self ± other` with combined bookkeeping.
    fn combine(self, other: Self, sign: f64) -> Self {
        Self {
            value: self.value + sign * other.value,
            terms_used: self.terms_used + other.terms_used,
            tail_estimate: self.tail_estimate + other.tail_estimate,
            status: self.status.worst(other.status),
            regime: self.regime,
        }
    }
}

/// The contracting lattice ratio pair: `|small / big| < 1`.
#[derive(Debug, Clone, Copy)]
struct Lattice {
    big: f64,
    small: f64,
}

impl Lattice {
    fn of(params: &PqParams) -> Result<Self> {
        let (p, q) = (params.p_f64(), params.q_f64());
        match params.regime() {
            Regime::RatioLtOne => Ok(Self { big: p, small: q }),
            Regime::RatioGtOne => Ok(Self { big: q, small: p }),
            Regime::Degenerate => Err(PqError::DegenerateRegime),
        }
    }

    fn ratio(&self) -> f64 {
        self.small / self.big
    }
}

/// Terms of the series for `∫_0^a f d_{p,q}x`, in summation order.
///
/// Term `k` is `(big - small) a w_k f(a w_k)` with `w_k = small^k / big^{k+1}`.
pub fn zero_to_terms<'f>(
    f: &'f NumericFn,
    a: f64,
    params: &PqParams,
) -> Result<impl Iterator<Item = f64> + 'f> {
    let lat = Lattice::of(params)?;
    let scale = (lat.big - lat.small) * a;
    let r = lat.ratio();
    let mut w = 1.0 / lat.big;
    Ok(std::iter::from_fn(move || {
        let t = scale * w * f.eval(a * w);
        w *= r;
        Some(t)
    }))
}

/// Terms of the series for `∫_a^∞ f d_{p,q}x`: the lattice points `a big^k / small^{k+1}`.
pub fn to_infinity_terms<'f>(
    f: &'f NumericFn,
    a: f64,
    params: &PqParams,
) -> Result<impl Iterator<Item = f64> + 'f> {
    let lat = Lattice::of(params)?;
    let scale = (lat.big - lat.small) * a;
    let r = lat.big / lat.small;
    let mut w = 1.0 / lat.small;
    Ok(std::iter::from_fn(move || {
        let t = scale * w * f.eval(a * w);
        w *= r;
        Some(t)
    }))
}

fn check_nonnegative(a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(PqError::InvalidInterval { a: 0.0, b: a })
    }
}

/// `∫_0^a f d_{p,q}x` for `a >= 0`.
pub fn integral_zero_to(
    f: &NumericFn,
    a: f64,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<IntegralResult> {
    policy.validate()?;
    let regime = params.regime();
    if regime == Regime::Degenerate {
        return Err(PqError::DegenerateRegime);
    }
    check_nonnegative(a)?;
    if a == 0.0 {
        return Ok(IntegralResult::zero(regime));
    }
    let sum = sum_series(zero_to_terms(f, a, params)?, policy);
    Ok(IntegralResult::from_sum(sum, regime))
}

/// `∫_a^b f d_{p,q}x = ∫_0^b - ∫_0^a` for `0 <= a < b`.
pub fn integral(
    f: &NumericFn,
    a: f64,
    b: f64,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<IntegralResult> {
    if params.regime() == Regime::Degenerate {
        return Err(PqError::DegenerateRegime);
    }
    if !(a >= 0.0 && a < b && b.is_finite()) {
        return Err(PqError::InvalidInterval { a, b });
    }
    let upper = integral_zero_to(f, b, params, policy)?;
    let lower = integral_zero_to(f, a, params, policy)?;
    Ok(upper.combine(lower, -1.0))
}

/// `∫_a^∞ f d_{p,q}x` for `a > 0`.
pub fn integral_to_infinity(
    f: &NumericFn,
    a: f64,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<IntegralResult> {
    policy.validate()?;
    let regime = params.regime();
    if regime == Regime::Degenerate {
        return Err(PqError::DegenerateRegime);
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(PqError::InvalidInterval {
            a,
            b: f64::INFINITY,
        });
    }
    let sum = sum_series(to_infinity_terms(f, a, params)?, policy);
    Ok(IntegralResult::from_sum(sum, regime))
}

/// `∫_0^∞ f d_{p,q}x` as the bilateral lattice sum
/// `(big - small) Σ_{j ∈ Z} small^j / big^{j+1} f(small^j / big^{j+1})`.
///
/// The `j >= 0` half (points shrinking to 0) and the `j < 0` half (points
/// growing to infinity) are truncated independently.
pub fn integral_improper(
    f: &NumericFn,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<IntegralResult> {
    policy.validate()?;
    let regime = params.regime();
    let lat = Lattice::of(params)?;
    let c = lat.big - lat.small;
    let term = move |j: i32| {
        let w = lat.small.powi(j) / lat.big.powi(j + 1);
        c * w * f.eval(w)
    };
    let inner = sum_series((0..).map(term), policy);
    let outer = sum_series((1..).map(|m: i32| term(-m)), policy);
    Ok(IntegralResult::from_sum(inner, regime)
        .combine(IntegralResult::from_sum(outer, regime), 1.0))
}

/// `∫ f d_{p,q}g` at `x`:
/// `Σ f(q^k x / p^{k+1}) (g(q^k x / p^k) - g(q^{k+1} x / p^{k+1}))`. Needs `|q/p| < 1`.
pub fn integral_riemann_stieltjes(
    f: &NumericFn,
    g: &NumericFn,
    x: f64,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<IntegralResult> {
    policy.validate()?;
    match params.regime() {
        Regime::RatioLtOne => {}
        Regime::RatioGtOne => return Err(PqError::WrongRegime),
        Regime::Degenerate => return Err(PqError::DegenerateRegime),
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(PqError::InvalidInterval { a: 0.0, b: x });
    }
    let (p, q) = (params.p_f64(), params.q_f64());
    let r = q / p;
    let mut node = x; // q^k x / p^k
    let terms = std::iter::from_fn(move || {
        let next = node * r;
        let t = f.eval(node / p) * (g.eval(node) - g.eval(next));
        node = next;
        Some(t)
    });
    Ok(IntegralResult::from_sum(
        sum_series(terms, policy),
        params.regime(),
    ))
}

/// Exact `(p,q)`-antiderivative of a polynomial: `Σ c_n x^{n+1} / [n+1] + C`.
pub fn antiderive_poly(
    f: &Polynomial,
    params: &PqParams,
    constant: &Rational,
) -> Result<Polynomial> {
    let mut coeffs = Vec::with_capacity(f.coeffs().len() + 1);
    coeffs.push(constant.clone());
    for (n, c) in f.coeffs().iter().enumerate() {
        let br = bracket(n as i64 + 1, params);
        if br.is_zero() {
            return Err(PqError::DivisionByZero);
        }
        coeffs.push(c / br);
    }
    Ok(Polynomial::new(coeffs))
}

/// Exact `n_terms`-term partial sum of the lattice series for `∫_0^a D_{p,q}F`.
///
/// By telescoping this equals `F(a) - F(a (small/big)^{n_terms})`.
pub fn exact_partial_sum(
    antiderivative: &Polynomial,
    a: &Rational,
    params: &PqParams,
    n_terms: usize,
) -> Result<Rational> {
    let (big, small) = match params.regime() {
        Regime::RatioLtOne => (params.p(), params.q()),
        Regime::RatioGtOne => (params.q(), params.p()),
        Regime::Degenerate => return Err(PqError::DegenerateRegime),
    };
    let df = pq_derive_poly(antiderivative, params);
    let ratio = small / big;
    let mut w = big.recip();
    let mut acc = Rational::zero();
    let scale = (big - small) * a;
    for _ in 0..n_terms {
        acc += &scale * &w * df.eval(&(a * &w));
        w *= &ratio;
    }
    Ok(acc)
}

/// The lattice contraction factor `small/big` as an exact rational.
pub fn lattice_ratio(params: &PqParams) -> Result<Rational> {
    match params.regime() {
        Regime::RatioLtOne => Ok(params.q() / params.p()),
        Regime::RatioGtOne => Ok(params.p() / params.q()),
        Regime::Degenerate => Err(PqError::DegenerateRegime),
    }
}

/// Result of the boundedness heuristic. It samples a finite grid, so it can
/// only suggest, never prove, that `|f(x) x^alpha|` is bounded near 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub bounded: bool,
    pub observed_bound: f64,
    pub heuristic: bool,
}

/// Samples `|f(x) x^alpha|` at `x = A r^i` (`r` the lattice ratio, `i < samples`)
/// and calls it bounded when the second half of the grid never exceeds the
/// maximum seen in the first half.
pub fn check_convergence_hypothesis(
    f: &NumericFn,
    upper: f64,
    alpha: f64,
    samples: usize,
    params: &PqParams,
) -> Result<HypothesisReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(PqError::OutOfRange(format!(
            "alpha = {alpha} not in [0, 1)"
        )));
    }
    if !(upper > 0.0 && upper.is_finite()) {
        return Err(PqError::OutOfRange(format!("A = {upper} must be positive")));
    }
    if samples < 8 {
        return Err(PqError::OutOfRange(format!("samples = {samples} < 8")));
    }
    let r = Lattice::of(params)?.ratio().abs();
    let values: Vec<f64> = (0..samples)
        .map(|i| {
            let x = upper * r.powi(i as i32);
            (f.eval(x) * x.powf(alpha)).abs()
        })
        .collect();
    let half = samples / 2;
    let head = values[..half].iter().copied().fold(0.0, f64::max);
    let tail = values[half..].iter().copied().fold(0.0, f64::max);
    let finite = values.iter().all(|v| v.is_finite());
    Ok(HypothesisReport {
        bounded: finite && tail <= head,
        observed_bound: head.max(tail),
        heuristic: true,
    })
}

/// Upper integration limit for the fundamental-theorem style checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    Finite(f64),
    Infinity,
}

/// Both sides of an integral identity and their distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub status: SeriesStatus,
}

impl GapReport {
    fn new(lhs: f64, rhs: f64, status: SeriesStatus) -> Self {
        Self {
            lhs,
            rhs,
            gap: (lhs - rhs).abs(),
            status,
        }
    }
}

/// `x -> D_{p,q} F(x)` as a sampled function; at 0 it is `F'(0)` when known.
pub fn pq_derivative_of(f: &NumericFn, params: &PqParams) -> NumericFn {
    let (p, q) = (params.p_f64(), params.q_f64());
    let d0 = f.derivative_at_zero();
    let inner = f.clone();
    NumericFn::new(move |x| {
        if x == 0.0 {
            d0.unwrap_or(f64::NAN)
        } else {
            (inner.eval(p * x) - inner.eval(q * x)) / ((p - q) * x)
        }
    })
}

fn value_at(f: &NumericFn, x: UpperLimit) -> Result<f64> {
    match x {
        UpperLimit::Finite(x) => Ok(f.eval(x)),
        UpperLimit::Infinity => f.limit_at_infinity().ok_or(PqError::MissingLimitAtInfinity),
    }
}

fn integral_to(
    f: &NumericFn,
    a: f64,
    b: UpperLimit,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<IntegralResult> {
    match b {
        UpperLimit::Finite(b) => integral(f, a, b, params, policy),
        UpperLimit::Infinity if a == 0.0 => integral_improper(f, params, policy),
        UpperLimit::Infinity => integral_to_infinity(f, a, params, policy),
    }
}

/// Compares `∫_a^b D_{p,q}F d_{p,q}x` with `F(b) - F(a)`.
///
/// The identity needs `F` continuous at 0; the caller is responsible for that.
pub fn newton_leibniz_check(
    antiderivative: &NumericFn,
    a: f64,
    b: UpperLimit,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<GapReport> {
    let df = pq_derivative_of(antiderivative, params);
    let lhs = integral_to(&df, a, b, params, policy)?;
    let rhs = value_at(antiderivative, b)? - antiderivative.eval(a);
    Ok(GapReport::new(lhs.value, rhs, lhs.status))
}

/// Compares `∫_a^b f(px) D_{p,q}g d_{p,q}x` with
/// `f(b)g(b) - f(a)g(a) - ∫_a^b g(qx) D_{p,q}f d_{p,q}x`.
pub fn integrate_by_parts(
    f: &NumericFn,
    g: &NumericFn,
    a: f64,
    b: UpperLimit,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<GapReport> {
    let (p, q) = (params.p_f64(), params.q_f64());
    let df = pq_derivative_of(f, params);
    let dg = pq_derivative_of(g, params);
    let (f1, g1) = (f.clone(), g.clone());
    let left_integrand = NumericFn::new(move |x| f1.eval(p * x) * dg.eval(x));
    let right_integrand = NumericFn::new(move |x| g1.eval(q * x) * df.eval(x));
    let left = integral_to(&left_integrand, a, b, params, policy)?;
    let right = integral_to(&right_integrand, a, b, params, policy)?;
    let boundary = value_at(f, b)? * value_at(g, b)? - f.eval(a) * g.eval(a);
    Ok(GapReport::new(
        left.value,
        boundary - right.value,
        left.status.worst(right.status),
    ))
}

/// `a^{n+1} / [n+1]_{p,q}`, the closed form of `∫_0^a x^n d_{p,q}x`.
pub fn monomial_integral(n: i64, a: &Rational, params: &PqParams) -> Result<Rational> {
    let br = bracket(n + 1, params);
    if br.is_zero() {
        return Err(PqError::DivisionByZero);
    }
    Ok(rpow(a, n + 1)? / br)
}
