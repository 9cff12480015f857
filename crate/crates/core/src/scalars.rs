//! Exact rationals, the `(p,q)` parameter pair, and twin-basic combinatorics.
//!
//! Everything algebraic in the crate runs on [`Rational`] so identities can be
//! checked with exact equality. Floating point only shows up for real
//! exponents ([`bracket_alpha`]) and in the integration module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PqError, Result};

/// Arbitrary precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Alias kept for readers coming from the data model.
pub type ExactScalar = Rational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or `"int"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || PqError::Parse(format!("not a rational literal: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(PqError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Formats in the literal form accepted by [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Integer power; negative exponents invert. Zero to a negative power is an error.
pub fn rpow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp < 0 && base.is_zero() {
        return Err(PqError::DivisionByZero);
    }
    let mut acc = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    Ok(acc)
}

/// `k choose 2`, defined for all integers as `k(k-1)/2`.
pub fn choose2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Which side of the unit circle the ratio `q/p` sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "lt1")]
    RatioLtOne,
    #[serde(rename = "gt1")]
    RatioGtOne,
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::RatioLtOne => "lt1",
            Regime::RatioGtOne => "gt1",
            Regime::Degenerate => "degenerate",
        })
    }
}

/// The deformation pair `(p, q)`. Guaranteed `p != q` and `p, q != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PqParams {
    p: Rational,
    q: Rational,
}

impl PqParams {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(PqError::ZeroParameter);
        }
        if p == q {
            return Err(PqError::EqualParameters);
        }
        Ok(Self { p, q })
    }

    /// Shorthand for `PqParams::new(p_num/p_den, q_num/q_den)`.
    pub fn from_ratios(p: (i64, i64), q: (i64, i64)) -> Result<Self> {
        if p.1 == 0 || q.1 == 0 {
            return Err(PqError::DivisionByZero);
        }
        Self::new(ratio(p.0, p.1), ratio(q.0, q.1))
    }

    pub fn parse(p: &str, q: &str) -> Result<Self> {
        Self::new(parse_rational(p)?, parse_rational(q)?)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn p_f64(&self) -> f64 {
        to_f64(&self.p)
    }

    pub fn q_f64(&self) -> f64 {
        to_f64(&self.q)
    }

    /// Classification of `|q/p|` against 1, derived from `p` and `q` on every call.
    pub fn regime(&self) -> Regime {
        match self.q.abs().cmp(&self.p.abs()) {
            std::cmp::Ordering::Less => Regime::RatioLtOne,
            std::cmp::Ordering::Greater => Regime::RatioGtOne,
            std::cmp::Ordering::Equal => Regime::Degenerate,
        }
    }

    /// The pair with roles exchanged. Every twin-basic quantity is symmetric under this.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

impl fmt::Display for PqParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(p={}, q={})",
            format_rational(&self.p),
            format_rational(&self.q)
        )
    }
}

/// A double with the tolerances it should be compared under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloatScalar {
    pub value: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl FloatScalar {
    pub const DEFAULT_ABS_TOL: f64 = 1e-12;
    pub const DEFAULT_REL_TOL: f64 = 1e-12;

    pub fn new(value: f64) -> Result<Self> {
        Self::with_tolerances(value, Self::DEFAULT_ABS_TOL, Self::DEFAULT_REL_TOL)
    }

    pub fn with_tolerances(value: f64, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(PqError::NonFinite(value));
        }
        Ok(Self {
            value,
            abs_tol,
            rel_tol,
        })
    }

    pub fn approx_eq(&self, other: f64) -> bool {
        let diff = (self.value - other).abs();
        diff <= self.abs_tol || diff <= self.rel_tol * self.value.abs().max(other.abs())
    }
}

/// Twin-basic number `[n]_{p,q} = (p^n - q^n)/(p - q)` for any integer `n`.
pub fn bracket(n: i64, params: &PqParams) -> Rational {
    // p, q are nonzero so both powers exist
    let pn = rpow(&params.p, n).expect("p != 0");
    let qn = rpow(&params.q, n).expect("q != 0");
    (pn - qn) / (&params.p - &params.q)
}

/// `[alpha]_{p,q}` for a real exponent. Needs `p, q > 0`.
pub fn bracket_alpha(alpha: f64, params: &PqParams) -> Result<FloatScalar> {
    let (p, q) = (params.p_f64(), params.q_f64());
    if p <= 0.0 || q <= 0.0 {
        return Err(PqError::NonPositiveBase { p, q });
    }
    FloatScalar::new((p.powf(alpha) - q.powf(alpha)) / (p - q))
}

/// `[n]_{p,q}! = [1][2]...[n]`, with `[0]! = 1`.
pub fn pq_factorial(n: i64, params: &PqParams) -> Result<Rational> {
    if n < 0 {
        return Err(PqError::NegativeArgument(n));
    }
    Ok((1..=n).fold(Rational::one(), |acc, k| acc * bracket(k, params)))
}

/// `(p,q)`-binomial coefficient `[n]! / ([k]! [n-k]!)` for `0 <= k <= n`.
pub fn pq_binomial(n: i64, k: i64, params: &PqParams) -> Result<Rational> {
    if k < 0 || k > n {
        return Err(PqError::OutOfRange(format!("binomial({n}, {k})")));
    }
    // product form avoids computing three full factorials
    let k = k.min(n - k);
    let mut acc = Rational::one();
    for i in 1..=k {
        // [i] vanishes for even i when p = -q
        let den = bracket(i, params);
        if den.is_zero() {
            return Err(PqError::DivisionByZero);
        }
        acc *= bracket(n - k + i, params);
        acc /= den;
    }
    Ok(acc)
}

/// Serde adapter storing a [`Rational`] as its literal string.
pub mod rational_serde {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a sequence of rationals stored as literal strings.
pub mod rational_vec_serde {
    use super::{format_rational, parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p: (i64, i64), q: (i64, i64)) -> PqParams {
        PqParams::from_ratios(p, q).unwrap()
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-1").unwrap(), int(-1));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("2/-4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("1/0"), Err(PqError::DivisionByZero));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn params_invariants() {
        assert_eq!(
            PqParams::from_ratios((1, 2), (1, 2)),
            Err(PqError::EqualParameters)
        );
        assert_eq!(
            PqParams::from_ratios((0, 1), (1, 2)),
            Err(PqError::ZeroParameter)
        );
        assert_eq!(
            PqParams::from_ratios((1, 1), (0, 3)),
            Err(PqError::ZeroParameter)
        );
        assert_eq!(params((1, 1), (1, 2)).regime(), Regime::RatioLtOne);
        assert_eq!(params((1, 1), (3, 1)).regime(), Regime::RatioGtOne);
        assert_eq!(params((1, 2), (-1, 2)).regime(), Regime::Degenerate);
    }

    #[test]
    fn rpow_cases() {
        assert_eq!(rpow(&ratio(2, 3), 3).unwrap(), ratio(8, 27));
        assert_eq!(rpow(&ratio(2, 3), -2).unwrap(), ratio(9, 4));
        assert_eq!(rpow(&int(0), 0).unwrap(), int(1));
        assert_eq!(rpow(&int(0), -1), Err(PqError::DivisionByZero));
    }

    #[test]
    fn bracket_examples() {
        let pq = params((2, 1), (1, 1));
        assert_eq!(bracket(0, &pq), int(0));
        assert_eq!(bracket(1, &params((5, 2), (-1, 3))), int(1));
        assert_eq!(bracket(3, &pq), int(7));
        assert_eq!(bracket(3, &pq), int(4) + int(2) + int(1));

        // literal (p^-2 - q^-2)/(p - q) at p = 2, q = 1/2
        let (p, q) = (ratio(2, 1), ratio(1, 2));
        let oracle = (int(1) / (&p * &p) - int(1) / (&q * &q)) / (&p - &q);
        assert_eq!(oracle, ratio(-5, 2));
        assert_eq!(bracket(-2, &params((2, 1), (1, 2))), ratio(-5, 2));
    }

    #[test]
    fn bracket_alpha_examples() {
        let v = bracket_alpha(2.0, &params((2, 1), (1, 1))).unwrap();
        assert!(v.approx_eq(3.0));
        let v = bracket_alpha(0.5, &params((4, 1), (1, 1))).unwrap();
        assert!((v.value - 1.0 / 3.0).abs() < 1e-15);
        let v = bracket_alpha(1.0, &params((5, 2), (1, 3))).unwrap();
        assert!(v.approx_eq(1.0));
        assert!(matches!(
            bracket_alpha(0.5, &params((-1, 2), (1, 3))),
            Err(PqError::NonPositiveBase { .. })
        ));
    }

    #[test]
    fn factorial_examples() {
        let pq = params((2, 1), (1, 1));
        assert_eq!(pq_factorial(0, &pq).unwrap(), int(1));
        assert_eq!(pq_factorial(1, &params((1, 3), (3, 1))).unwrap(), int(1));
        assert_eq!(pq_factorial(4, &pq).unwrap(), int(315));
        let oracle: Rational = (1..=4).map(|k| bracket(k, &pq)).product();
        assert_eq!(oracle, int(315));
        assert_eq!(pq_factorial(-1, &pq), Err(PqError::NegativeArgument(-1)));
    }

    #[test]
    fn binomial_examples() {
        let pq = params((2, 1), (1, 1));
        assert_eq!(pq_binomial(5, 0, &pq).unwrap(), int(1));
        assert_eq!(pq_binomial(4, 2, &pq).unwrap(), int(35));
        assert_eq!(int(315) / (int(3) * int(3)), int(35));
        assert!(matches!(
            pq_binomial(3, 4, &pq),
            Err(PqError::OutOfRange(_))
        ));
        assert!(matches!(
            pq_binomial(3, -1, &pq),
            Err(PqError::OutOfRange(_))
        ));
        for (p, q) in [((1, 3), (5, 2)), ((-1, 2), (3, 1)), ((2, 1), (-1, 3))] {
            let pq = params(p, q);
            assert_eq!(pq_binomial(3, 1, &pq).unwrap(), bracket(3, &pq));
        }
    }

    #[test]
    fn binomial_with_vanishing_bracket() {
        let pq = params((1, 2), (-1, 2));
        assert_eq!(bracket(2, &pq), int(0));
        assert_eq!(pq_binomial(4, 2, &pq), Err(PqError::DivisionByZero));
    }

    #[test]
    fn float_scalar_rejects_non_finite() {
        assert!(FloatScalar::new(f64::NAN).is_err());
        assert!(FloatScalar::new(f64::INFINITY).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
    }

    fn any_params() -> impl Strategy<Value = PqParams> {
        (small_rational(), small_rational())
            .prop_filter_map("valid pair", |(p, q)| PqParams::new(p, q).ok())
    }

    proptest! {
        #[test]
        fn bracket_is_symmetric(n in -8i64..=12, pq in any_params()) {
            prop_assert_eq!(bracket(n, &pq), bracket(n, &pq.swapped()));
        }

        #[test]
        fn bracket_matches_sum_form(n in 1i64..=12, pq in any_params()) {
            let sum: Rational = (0..n)
                .map(|k| rpow(pq.p(), n - 1 - k).unwrap() * rpow(pq.q(), k).unwrap())
                .sum();
            prop_assert_eq!(bracket(n, &pq), sum);
        }

        #[test]
        fn bracket_reduces_to_q_number(n in 0i64..=12, q in small_rational()) {
            prop_assume!(!q.is_zero() && q != int(1));
            let pq = PqParams::new(int(1), q.clone()).unwrap();
            let expected = (int(1) - rpow(&q, n).unwrap()) / (int(1) - q);
            prop_assert_eq!(bracket(n, &pq), expected);
        }

        #[test]
        fn binomial_symmetry_and_homogenization(n in 0i64..=9, k in 0i64..=9, pq in any_params()) {
            prop_assume!(k <= n && pq.p() != &-pq.q());
            let lhs = pq_binomial(n, k, &pq).unwrap();
            prop_assert_eq!(&lhs, &pq_binomial(n, n - k, &pq).unwrap());
            let reduced = PqParams::new(int(1), pq.q() / pq.p()).unwrap();
            let rhs = rpow(pq.p(), k * (n - k)).unwrap() * pq_binomial(n, k, &reduced).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_alpha_agrees_at_integers(n in -5i64..=10, p in 1i64..=9, q in 1i64..=9) {
            prop_assume!(4 * p != 3 * q);
            let pq = PqParams::from_ratios((p, 3), (q, 4)).unwrap();
            let exact = to_f64(&bracket(n, &pq));
            let v = bracket_alpha(n as f64, &pq).unwrap();
            prop_assert!((v.value - exact).abs() <= 1e-10 * exact.abs().max(1.0));
        }
    }
}
