//! `(p,q)`-Taylor expansions of polynomials, the connection formulas between
//! the canonical and `(p,q)`-power bases, and the Heine-type series.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PqError, Result};
use crate::integration::{sum_series, SeriesStatus, SeriesSum, TruncationPolicy};
use crate::polynomials::{pq_derive_poly, Polynomial};
use crate::pqpower::{pq_power_value, Orientation, PqPowerExpr};
use crate::scalars::{
    bracket, choose2, int, pq_binomial, rational_serde, rational_vec_serde, rpow, to_f64, PqParams,
    Rational,
};

/// `Σ coeffs[k] · (x ⊖ a)^k` or `Σ coeffs[k] · (a ⊖ x)^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerBasisExpansion {
    #[serde(with = "rational_serde")]
    pub a: Rational,
    pub orientation: Orientation,
    #[serde(with = "rational_vec_serde")]
    pub coeffs: Vec<Rational>,
}

impl PowerBasisExpansion {
    fn basis(&self, k: usize, params: &PqParams) -> PqPowerExpr {
        match self.orientation {
            Orientation::XminusA => PqPowerExpr::forward(self.a.clone(), k as i64, params.clone()),
            Orientation::AminusX => PqPowerExpr::reversed(self.a.clone(), k as i64, params.clone()),
        }
    }

    /// The represented polynomial in the canonical basis.
    pub fn reconstruct(&self, params: &PqParams) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &self.basis(k, params).expand()?.scale(c);
        }
        Ok(acc)
    }

    /// Evaluates the expansion at `x` term by term.
    pub fn eval(&self, x: &Rational, params: &PqParams) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * self.basis(k, params).eval(x)?;
            }
        }
        Ok(acc)
    }
}

fn trim(mut coeffs: Vec<Rational>) -> Vec<Rational> {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Shared driver: `c_k = sign^k base^{-C(k,2)} (D^k f)(a base^{-k}) / [k]!`.
fn expand_with(
    f: &Polynomial,
    a: &Rational,
    params: &PqParams,
    base: &Rational,
    alternate: bool,
) -> Result<Vec<Rational>> {
    let n = f.degree().map_or(0, |d| d + 1);
    let mut coeffs = Vec::with_capacity(n);
    let mut dk = f.clone();
    let mut fact = Rational::one();
    for k in 0..n as i64 {
        if k > 0 {
            dk = pq_derive_poly(&dk, params);
            fact *= bracket(k, params);
        }
        if fact.is_zero() {
            return Err(PqError::DivisionByZero);
        }
        let point = a * rpow(base, -k)?;
        let mut c = rpow(base, -choose2(k))? * dk.eval(&point) / &fact;
        if alternate && k % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    Ok(trim(coeffs))
}

/// Expansion of `f` over `(x ⊖ a)^k`: `c_k = p^{-C(k,2)} (D^k f)(a p^{-k}) / [k]!`.
///
/// Fails only when some `[k]_{p,q}` vanishes (`p = -q`, `k >= 2`).
pub fn taylor_expand(
    f: &Polynomial,
    a: &Rational,
    params: &PqParams,
) -> Result<PowerBasisExpansion> {
    Ok(PowerBasisExpansion {
        a: a.clone(),
        orientation: Orientation::XminusA,
        coeffs: expand_with(f, a, params, params.p(), false)?,
    })
}

/// Expansion of `f` over `(a ⊖ x)^k`: `c_k = (-1)^k q^{-C(k,2)} (D^k f)(a q^{-k}) / [k]!`.
pub fn taylor_expand_reversed(
    f: &Polynomial,
    a: &Rational,
    params: &PqParams,
) -> Result<PowerBasisExpansion> {
    Ok(PowerBasisExpansion {
        a: a.clone(),
        orientation: Orientation::AminusX,
        coeffs: expand_with(f, a, params, params.q(), true)?,
    })
}

/// `x^n = Σ_k p^{-C(k,2)} binom(n,k) (a p^{-k})^{n-k} (x ⊖ a)^k`, with `0^0 = 1`.
pub fn connect_monomial(n: usize, a: &Rational, params: &PqParams) -> Result<Vec<Rational>> {
    connect_with(n, a, params, params.p(), false)
}

/// `x^n = Σ_k (-1)^k q^{-C(k,2)} binom(n,k) (a q^{-k})^{n-k} (a ⊖ x)^k`.
pub fn connect_monomial_reversed(
    n: usize,
    a: &Rational,
    params: &PqParams,
) -> Result<Vec<Rational>> {
    connect_with(n, a, params, params.q(), true)
}

fn connect_with(
    n: usize,
    a: &Rational,
    params: &PqParams,
    base: &Rational,
    alternate: bool,
) -> Result<Vec<Rational>> {
    let n = n as i64;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let point = a * rpow(base, -k)?;
        let mut c = rpow(base, -choose2(k))? * pq_binomial(n, k, params)? * rpow(&point, n - k)?;
        if alternate && k % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    Ok(trim(coeffs))
}

/// Re-centres a `(p,q)`-power at `a`:
///
/// - `XminusA`: `(x ⊖ b)^n = Σ binom(n,k) (a ⊖ b)^{n-k} (x ⊖ a)^k`
/// - `AminusX`: `(b ⊖ x)^n = Σ binom(n,k) (b ⊖ a)^{n-k} (a ⊖ x)^k`
pub fn connect_power_to_power(
    b: &Rational,
    a: &Rational,
    n: usize,
    params: &PqParams,
    orientation: Orientation,
) -> Result<PowerBasisExpansion> {
    let n = n as i64;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let shift = match orientation {
            Orientation::XminusA => pq_power_value(a, b, n - k, params)?,
            Orientation::AminusX => pq_power_value(b, a, n - k, params)?,
        };
        coeffs.push(pq_binomial(n, k, params)? * shift);
    }
    Ok(PowerBasisExpansion {
        a: a.clone(),
        orientation,
        coeffs: trim(coeffs),
    })
}

/// `(z; q)_n = (1 - z)(1 - qz)...(1 - q^{n-1}z)`.
pub fn q_pochhammer(z: &Rational, q: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut qj = Rational::one();
    for _ in 0..n {
        acc *= Rational::one() - &qj * z;
        qj *= q;
    }
    acc
}

/// Checks the `q`-binomial theorem
/// `(ab;q)_n = Σ binom_q(n,k) a^{n-k} (b;q)_{n-k} (a;q)_k`
/// three ways: the Pochhammer product, the sum, and [`connect_power_to_power`]
/// at `p = 1`, `b <- ab`, `x = 1`. True when all three agree exactly.
pub fn q_binomial_reduction_check(
    a: &Rational,
    b: &Rational,
    n: usize,
    q: &Rational,
) -> Result<bool> {
    let params = PqParams::new(Rational::one(), q.clone())?;
    let ab = a * b;
    let direct = q_pochhammer(&ab, q, n);

    let mut sum = Rational::zero();
    for k in 0..=n {
        let binom = pq_binomial(n as i64, k as i64, &params)?;
        sum += binom * rpow(a, (n - k) as i64)? * q_pochhammer(b, q, n - k) * q_pochhammer(a, q, k);
    }

    let via_connection = connect_power_to_power(&ab, a, n, &params, Orientation::XminusA)?
        .eval(&Rational::one(), &params)?;
    Ok(direct == sum && direct == via_connection)
}

/// `binom(n+j-1, j)_{p,q} p^{j - C(j,2)}`, the `x^j` coefficient of the Heine-type series.
pub fn heine_coeff(n: i64, j: i64, params: &PqParams) -> Result<Rational> {
    if n < 1 {
        return Err(PqError::OutOfRange(format!("n = {n} must be positive")));
    }
    if j < 0 {
        return Err(PqError::NegativeArgument(j));
    }
    Ok(pq_binomial(n + j - 1, j, params)? * rpow(params.p(), j - choose2(j))?)
}

/// Sums `Σ_{j>=0} heine_coeff(n, j) x^j` under `policy`.
///
/// Terms are produced by the exact coefficient recurrence and summed in `f64`.
/// A divergent series is an error; `MaxTermsReached` is returned as a status.
pub fn heine_series_eval(
    n: i64,
    x: f64,
    params: &PqParams,
    policy: &TruncationPolicy,
) -> Result<SeriesSum> {
    policy.validate()?;
    if n < 1 {
        return Err(PqError::OutOfRange(format!("n = {n} must be positive")));
    }
    if !x.is_finite() {
        return Err(PqError::NonFinite(x));
    }
    if x == 0.0 {
        return Ok(SeriesSum {
            value: 1.0,
            terms_used: 1,
            tail_estimate: 0.0,
            status: SeriesStatus::Converged,
        });
    }
    let p = params.p().clone();
    let p_inv = p.recip();
    let params = params.clone();
    // c_{j+1} = c_j · [n+j]/[j+1] · p^{1-j}
    let mut c = Rational::one();
    let mut j = 0i64;
    let mut xj = 1.0f64;
    let mut failed = false;
    let terms = std::iter::from_fn(|| {
        if failed {
            return None;
        }
        let t = to_f64(&c) * xj;
        let den = bracket(j + 1, &params);
        if den.is_zero() {
            failed = true;
            return Some(f64::NAN);
        }
        let pj = if j == 0 {
            p.clone()
        } else {
            rpow(&p_inv, j - 1).unwrap_or_else(|_| int(0))
        };
        c = &c * bracket(n + j, &params) / den * pj;
        j += 1;
        xj *= x;
        Some(t)
    });
    let sum = sum_series(terms, policy);
    if sum.status == SeriesStatus::DivergenceDetected {
        return Err(PqError::DivergenceDetected {
            terms: sum.terms_used,
        });
    }
    Ok(sum)
}

/// Coefficients `0..=degree` of `1 / (1 ⊖ x)^n` by power-series long division
/// of 1 by the expanded reversed power.
pub fn reciprocal_series_coeffs(n: i64, degree: usize, params: &PqParams) -> Result<Vec<Rational>> {
    let den = PqPowerExpr::reversed(Rational::one(), n, params.clone()).expand()?;
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(PqError::DivisionByZero);
    }
    let mut out: Vec<Rational> = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        let mut acc = if j == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
        for i in 1..=j {
            acc -= den.coeff(i) * &out[j - i];
        }
        out.push(acc / &d0);
    }
    Ok(out)
}

/// Outcome of comparing `heine_coeff` against long division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeineVerdict {
    pub matches: bool,
    /// First `(n, j)` where the two disagree.
    pub first_mismatch: Option<(i64, usize)>,
}

/// Compares `heine_coeff(n, j)` with [`reciprocal_series_coeffs`] for
/// `1 <= n <= max_n`, `0 <= j <= max_j`.
pub fn heine_verdict(params: &PqParams, max_n: i64, max_j: usize) -> Result<HeineVerdict> {
    for n in 1..=max_n {
        let oracle = reciprocal_series_coeffs(n, max_j, params)?;
        for (j, expected) in oracle.iter().enumerate() {
            if heine_coeff(n, j as i64, params)? != *expected {
                return Ok(HeineVerdict {
                    matches: false,
                    first_mismatch: Some((n, j)),
                });
            }
        }
    }
    Ok(HeineVerdict {
        matches: true,
        first_mismatch: None,
    })
}
