//! Dense polynomials over the rationals and the `(p,q)`-derivative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{PqError, Result};
use crate::scalars::{bracket, format_rational, parse_rational, PqParams, Rational};

/// Polynomial in the canonical basis; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^n`
    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `c0 + c1 x`
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::scalars::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x -> f(c x)`
    pub fn dilate(&self, c: &Rational) -> Self {
        let mut power = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        Self::new(out)
    }
}

impl fmt::Display for Polynomial {
    /// Dense `c0,c1,...,cN`; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Polynomial {
    type Err = PqError;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(PqError::Parse("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

/// `D_{p,q}` on the canonical basis: `x^n -> [n]_{p,q} x^{n-1}`.
pub fn pq_derive_poly(f: &Polynomial, params: &PqParams) -> Polynomial {
    Polynomial::new(
        f.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| bracket(n as i64, params) * c)
            .collect(),
    )
}

/// `k`-fold [`pq_derive_poly`]; `k = 0` is the identity.
pub fn pq_derive_poly_k(f: &Polynomial, k: usize, params: &PqParams) -> Polynomial {
    let mut g = f.clone();
    for _ in 0..k {
        if g.is_zero() {
            break;
        }
        g = pq_derive_poly(&g, params);
    }
    g
}

/// Exact `(f(px) - f(qx)) / ((p - q) x)` for any rational-valued evaluator.
///
/// The evaluator may fail (poles); `x = 0` is rejected since the quotient is undefined there.
pub fn pq_difference_quotient<F>(f: F, x: &Rational, params: &PqParams) -> Result<Rational>
where
    F: Fn(&Rational) -> Result<Rational>,
{
    if x.is_zero() {
        return Err(PqError::DivisionByZero);
    }
    let hi = f(&(params.p() * x))?;
    let lo = f(&(params.q() * x))?;
    Ok((hi - lo) / ((params.p() - params.q()) * x))
}

/// A real function sampled by the numeric routines.
///
/// Evaluators must be deterministic. `derivative_at_zero` is the ordinary
/// `f'(0)` used for `D_{p,q} f(0)`; `limit_at_infinity` is needed only when an
/// integral runs to infinity.
#[derive(Clone)]
pub struct NumericFn {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative_at_zero: Option<f64>,
    limit_at_infinity: Option<f64>,
}

impl NumericFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            derivative_at_zero: None,
            limit_at_infinity: None,
        }
    }

    /// Evaluator for a rational polynomial; `f'(0)` is attached automatically.
    pub fn from_poly(f: &Polynomial) -> Self {
        let d0 = f.coeff(1).to_f64().unwrap_or(f64::NAN);
        let coeffs: Vec<f64> = f
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        Self::new(move |x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
            .with_derivative_at_zero(d0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
            .with_derivative_at_zero(0.0)
            .with_limit_at_infinity(c)
    }

    pub fn with_derivative_at_zero(mut self, d: f64) -> Self {
        self.derivative_at_zero = Some(d);
        self
    }

    pub fn with_limit_at_infinity(mut self, l: f64) -> Self {
        self.limit_at_infinity = Some(l);
        self
    }

    pub fn derivative_at_zero(&self) -> Option<f64> {
        self.derivative_at_zero
    }

    pub fn limit_at_infinity(&self) -> Option<f64> {
        self.limit_at_infinity
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }
}

impl fmt::Debug for NumericFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericFn")
            .field("derivative_at_zero", &self.derivative_at_zero)
            .field("limit_at_infinity", &self.limit_at_infinity)
            .finish_non_exhaustive()
    }
}

const ZERO_FALLBACK_REL_TOL: f64 = 1e-8;

/// Numeric `D_{p,q} f(x)`.
///
/// At `x = 0` the attached `f'(0)` is used. Without one, the quotient is
/// evaluated at `h = 2^-10, ..., 2^-40` and accepted once two successive
/// values agree to `1e-8` (relative, with a floor of 1 on the scale).
pub fn pq_derive_fn(f: &NumericFn, x: f64, params: &PqParams) -> Result<f64> {
    let (p, q) = (params.p_f64(), params.q_f64());
    let quotient = |x: f64| (f.eval(p * x) - f.eval(q * x)) / ((p - q) * x);
    if x != 0.0 {
        return Ok(quotient(x));
    }
    if let Some(d) = f.derivative_at_zero {
        return Ok(d);
    }
    let mut prev: Option<f64> = None;
    for e in 10..=40 {
        let v = quotient(2f64.powi(-e));
        if let Some(u) = prev {
            let scale = u.abs().max(v.abs()).max(1.0);
            if v.is_finite() && (v - u).abs() <= ZERO_FALLBACK_REL_TOL * scale {
                return Ok(v);
            }
        }
        prev = Some(v);
    }
    Err(PqError::MissingDerivativeAtZero)
}
