//! The `(p,q)`-power basis `(γx ⊖ a)^n` and its reversed twin `(a ⊖ γx)^n`.
//!
//! For `n >= 0`, `(X ⊖ A)^n = (X - A)(pX - qA)...(p^{n-1}X - q^{n-1}A)`.
//! Negative exponents are defined through the reciprocal
//! `(X ⊖ A)^{-n} = 1 / (p^{-n}X ⊖ q^{-n}A)^n`, which makes the additive law
//! `(X ⊖ A)^{m+n} = (X ⊖ A)^m (p^m X ⊖ q^m A)^n` hold for all integers.
//!
//! The reversed basis swaps the roles of `x` and `a` inside every factor. It is
//! *not* `(-1)^n (x ⊖ a)^n` unless `p = q`, so it carries its own orientation
//! tag instead of a negated scale.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PqError, Result};
use crate::polynomials::{pq_difference_quotient, Polynomial};
use crate::scalars::{bracket, choose2, format_rational, parse_rational, rpow, PqParams, Rational};

/// Which argument of `⊖` carries the variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `(γx ⊖ a)^n`
    #[serde(rename = "x-a")]
    XminusA,
    /// `(a ⊖ γx)^n`
    #[serde(rename = "a-x")]
    AminusX,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::XminusA => "x-a",
            Orientation::AminusX => "a-x",
        })
    }
}

/// `(X ⊖ A)^n` for arbitrary scalar arguments and any integer `n`.
pub fn pq_power_value(x: &Rational, a: &Rational, n: i64, params: &PqParams) -> Result<Rational> {
    if n >= 0 {
        let (mut pj, mut qj) = (Rational::one(), Rational::one());
        let mut acc = Rational::one();
        for _ in 0..n {
            acc *= &pj * x - &qj * a;
            pj *= params.p();
            qj *= params.q();
        }
        return Ok(acc);
    }
    let m = -n;
    let xs = rpow(params.p(), n)? * x;
    let as_ = rpow(params.q(), n)? * a;
    let den = pq_power_value(&xs, &as_, m, params)?;
    if den.is_zero() {
        return Err(PqError::PoleAtPoint(format!(
            "({} ⊖ {})^{n}",
            format_rational(x),
            format_rational(a)
        )));
    }
    Ok(den.recip())
}

/// A single `(p,q)`-power term as a function of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PqPowerExpr {
    pub gamma: Rational,
    pub a: Rational,
    pub n: i64,
    pub orientation: Orientation,
    pub params: PqParams,
}

impl PqPowerExpr {
    /// `(x ⊖ a)^n`
    pub fn forward(a: Rational, n: i64, params: PqParams) -> Self {
        Self {
            gamma: Rational::one(),
            a,
            n,
            orientation: Orientation::XminusA,
            params,
        }
    }

    /// `(a ⊖ x)^n`
    pub fn reversed(a: Rational, n: i64, params: PqParams) -> Self {
        Self {
            orientation: Orientation::AminusX,
            ..Self::forward(a, n, params)
        }
    }

    pub fn with_gamma(mut self, gamma: Rational) -> Self {
        self.gamma = gamma;
        self
    }

    /// Parses `pqpow(a=<rat>, n=<int>[, gamma=<rat>])` or `pqpowrev(...)`.
    pub fn parse(s: &str, params: &PqParams) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| PqError::Parse(format!("{why}: {s:?}"));
        let open = s.find('(').ok_or_else(|| bad("missing '('"))?;
        let body = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| bad("missing ')'"))?;
        let orientation = match s[..open].trim() {
            "pqpow" => Orientation::XminusA,
            "pqpowrev" => Orientation::AminusX,
            _ => return Err(bad("expected pqpow or pqpowrev")),
        };
        let (mut a, mut n, mut gamma) = (None, None, Rational::one());
        for field in body.split(',').filter(|f| !f.trim().is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "a" => a = Some(parse_rational(value)?),
                "n" => {
                    n = Some(
                        value
                            .trim()
                            .parse::<i64>()
                            .map_err(|_| bad("n must be an integer"))?,
                    )
                }
                "gamma" => gamma = parse_rational(value)?,
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        Ok(Self {
            gamma,
            a: a.ok_or_else(|| bad("missing a"))?,
            n: n.ok_or_else(|| bad("missing n"))?,
            orientation,
            params: params.clone(),
        })
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let gx = &self.gamma * x;
        match self.orientation {
            Orientation::XminusA => pq_power_value(&gx, &self.a, self.n, &self.params),
            Orientation::AminusX => pq_power_value(&self.a, &gx, self.n, &self.params),
        }
    }

    /// Canonical-basis form; only defined for `n >= 0`.
    pub fn expand(&self) -> Result<Polynomial> {
        if self.n < 0 {
            return Err(PqError::NegativeArgument(self.n));
        }
        let (p, q) = (self.params.p(), self.params.q());
        let (mut pj, mut qj) = (Rational::one(), Rational::one());
        let mut acc = Polynomial::constant(Rational::one());
        for _ in 0..self.n {
            let factor = match self.orientation {
                Orientation::XminusA => Polynomial::linear(-(&qj * &self.a), &pj * &self.gamma),
                Orientation::AminusX => Polynomial::linear(&pj * &self.a, -(&qj * &self.gamma)),
            };
            acc = &acc * &factor;
            pj *= p;
            qj *= q;
        }
        Ok(acc)
    }

    /// One application of `D_{p,q}`: returns `(c, e')` with `D e = c * e'`.
    ///
    /// Forward: `D(γx ⊖ a)^n = γ[n] (γpx ⊖ a)^{n-1}`.
    /// Reversed: `D(a ⊖ γx)^n = -γ[n] (a ⊖ γqx)^{n-1}`.
    /// Both hold for every integer `n`; at `n = 0` the coefficient is 0.
    pub fn derive(&self) -> (Rational, PqPowerExpr) {
        let br = bracket(self.n, &self.params);
        let mut next = self.clone();
        next.n = self.n - 1;
        let coeff = match self.orientation {
            Orientation::XminusA => {
                next.gamma = &self.gamma * self.params.p();
                &self.gamma * br
            }
            Orientation::AminusX => {
                next.gamma = &self.gamma * self.params.q();
                -(&self.gamma * br)
            }
        };
        (coeff, next)
    }

    /// `D^k` in closed form for `0 <= k <= n`.
    ///
    /// Forward: `γ^k p^{C(k,2)} [n]!/[n-k]! (γp^k x ⊖ a)^{n-k}`;
    /// reversed: `(-γ)^k q^{C(k,2)} [n]!/[n-k]! (a ⊖ γq^k x)^{n-k}`.
    pub fn derive_k(&self, k: i64) -> Result<(Rational, PqPowerExpr)> {
        if self.n < 0 {
            return Err(PqError::NegativeArgument(self.n));
        }
        if k < 0 || k > self.n {
            return Err(PqError::OutOfRange(format!("k = {k} with n = {}", self.n)));
        }
        let falling: Rational = (0..k).map(|i| bracket(self.n - i, &self.params)).product();
        let base = match self.orientation {
            Orientation::XminusA => self.params.p(),
            Orientation::AminusX => self.params.q(),
        };
        let sign = match self.orientation {
            Orientation::AminusX if k % 2 == 1 => -Rational::one(),
            _ => Rational::one(),
        };
        let coeff = sign * rpow(&self.gamma, k)? * rpow(base, choose2(k))? * falling;
        let mut next = self.clone();
        next.n = self.n - k;
        next.gamma = &self.gamma * rpow(base, k)?;
        Ok((coeff, next))
    }
}

impl fmt::Display for PqPowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.orientation {
            Orientation::XminusA => "pqpow",
            Orientation::AminusX => "pqpowrev",
        };
        write!(
            f,
            "{name}(a={}, n={}, gamma={})",
            format_rational(&self.a),
            self.n,
            format_rational(&self.gamma)
        )
    }
}

pub fn eval_pq_power(e: &PqPowerExpr, x: &Rational) -> Result<Rational> {
    e.eval(x)
}

/// `(x ⊖ a)^n` expanded in the canonical basis; leading coefficient `p^{C(n,2)}`.
pub fn expand_pq_power(a: &Rational, n: i64, params: &PqParams) -> Result<Polynomial> {
    PqPowerExpr::forward(a.clone(), n, params.clone()).expand()
}

pub fn derive_pq_power(e: &PqPowerExpr) -> (Rational, PqPowerExpr) {
    e.derive()
}

/// `D^k (x ⊖ a)^n = p^{C(k,2)} [n]!/[n-k]! (p^k x ⊖ a)^{n-k}`.
pub fn derive_pq_power_k(
    a: &Rational,
    n: i64,
    k: i64,
    params: &PqParams,
) -> Result<(Rational, PqPowerExpr)> {
    PqPowerExpr::forward(a.clone(), n, params.clone()).derive_k(k)
}

/// `D^k (a ⊖ x)^n = (-1)^k q^{C(k,2)} [n]!/[n-k]! (a ⊖ q^k x)^{n-k}`.
pub fn derive_reversed_k(
    a: &Rational,
    n: i64,
    k: i64,
    params: &PqParams,
) -> Result<(Rational, PqPowerExpr)> {
    PqPowerExpr::reversed(a.clone(), n, params.clone()).derive_k(k)
}

/// Checks `(x ⊖ a)^{m+n} = (x ⊖ a)^m (p^m x ⊖ q^m a)^n` exactly at `x`.
pub fn additive_law_check(
    a: &Rational,
    m: i64,
    n: i64,
    params: &PqParams,
    x: &Rational,
) -> Result<bool> {
    let lhs = pq_power_value(x, a, m + n, params)?;
    let shifted_x = rpow(params.p(), m)? * x;
    let shifted_a = rpow(params.q(), m)? * a;
    let rhs = pq_power_value(x, a, m, params)? * pq_power_value(&shifted_x, &shifted_a, n, params)?;
    Ok(lhs == rhs)
}

fn pole(what: &str) -> PqError {
    PqError::PoleAtPoint(what.to_string())
}

fn reciprocal(v: Rational, what: &str) -> Result<Rational> {
    if v.is_zero() {
        Err(pole(what))
    } else {
        Ok(v.recip())
    }
}

/// Pointwise check of the three reciprocal/reversed derivative rules at `x`:
///
/// 1. `D 1/(x ⊖ a)^n = -q[n] / (qx ⊖ a)^{n+1}`
/// 2. `D (a ⊖ x)^n = -[n] (a ⊖ qx)^{n-1}`
/// 3. `D 1/(a ⊖ x)^n = p[n] / (a ⊖ px)^{n+1}`
///
/// The left sides are the exact difference quotient of the function itself.
pub fn reciprocal_rules_check(
    a: &Rational,
    n: i64,
    params: &PqParams,
    x: &Rational,
) -> Result<[bool; 3]> {
    if n < 0 {
        return Err(PqError::NegativeArgument(n));
    }
    let (p, q) = (params.p(), params.q());
    let br = bracket(n, params);

    let lhs1 = pq_difference_quotient(
        |t| reciprocal(pq_power_value(t, a, n, params)?, "1/(x ⊖ a)^n"),
        x,
        params,
    )?;
    let rhs1 = -(q * &br)
        * reciprocal(
            pq_power_value(&(q * x), a, n + 1, params)?,
            "(qx ⊖ a)^{n+1}",
        )?;

    let lhs2 = pq_difference_quotient(|t| pq_power_value(a, t, n, params), x, params)?;
    let rhs2 = if n == 0 {
        Rational::zero()
    } else {
        -&br * pq_power_value(a, &(q * x), n - 1, params)?
    };

    let lhs3 = pq_difference_quotient(
        |t| reciprocal(pq_power_value(a, t, n, params)?, "1/(a ⊖ x)^n"),
        x,
        params,
    )?;
    let rhs3 = p
        * &br
        * reciprocal(
            pq_power_value(a, &(p * x), n + 1, params)?,
            "(a ⊖ px)^{n+1}",
        )?;

    Ok([lhs1 == rhs1, lhs2 == rhs2, lhs3 == rhs3])
}

/// `(x ⊖ a)^{-n} (p^{-n}x ⊖ q^{-n}a)^n`, which must equal 1 away from poles.
pub fn negative_power_product(
    a: &Rational,
    n: i64,
    params: &PqParams,
    x: &Rational,
) -> Result<Rational> {
    let neg = pq_power_value(x, a, -n, params)?;
    let xs = rpow(params.p(), -n)? * x;
    let as_ = rpow(params.q(), -n)? * a;
    Ok(neg * pq_power_value(&xs, &as_, n, params)?)
}

/// Convenience: `(a ⊖ b)^n` as a scalar (both arguments constant).
pub fn pq_power_scalar(a: &Rational, b: &Rational, n: i64, params: &PqParams) -> Result<Rational> {
    pq_power_value(a, b, n, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{pq_derive_poly, pq_derive_poly_k};
    use crate::scalars::{int, pq_factorial, ratio};
    use proptest::prelude::*;

    fn params(p: (i64, i64), q: (i64, i64)) -> PqParams {
        PqParams::from_ratios(p, q).unwrap()
    }

    #[test]
    fn eval_examples() {
        let pq = params((2, 1), (1, 1));
        let e = PqPowerExpr::forward(ratio(7, 3), 0, pq.clone());
        assert_eq!(e.eval(&ratio(-5, 2)).unwrap(), int(1));
        let e = PqPowerExpr::forward(int(0), 3, pq.clone());
        assert_eq!(e.eval(&int(1)).unwrap(), int(8));
        let e = PqPowerExpr::forward(int(1), 2, params((3, 1), (2, 1)));
        assert_eq!(e.eval(&int(1)).unwrap(), int(0));
        let e = PqPowerExpr::forward(int(1), -1, params((2, 1), (1, 2)));
        assert_eq!(e.eval(&int(1)).unwrap(), ratio(-2, 3));
        // literal definition: 1/(x/2 - 2) at x = 1
        assert_eq!((ratio(1, 2) - int(2)).recip(), ratio(-2, 3));
    }

    #[test]
    fn eval_at_pole_is_error() {
        let pq = params((2, 1), (1, 2));
        // (x ⊖ 1)^{-1} = 1/(x/2 - 2) has a pole at x = 4
        let e = PqPowerExpr::forward(int(1), -1, pq);
        assert!(matches!(e.eval(&int(4)), Err(PqError::PoleAtPoint(_))));
    }

    #[test]
    fn expand_examples() {
        let pq = params((5, 2), (-1, 3));
        let a = ratio(2, 7);
        assert_eq!(
            expand_pq_power(&a, 0, &pq).unwrap(),
            Polynomial::from_ints(&[1])
        );
        assert_eq!(
            expand_pq_power(&a, 1, &pq).unwrap(),
            Polynomial::linear(-a.clone(), int(1))
        );
        let (p, q) = (pq.p().clone(), pq.q().clone());
        let expected = Polynomial::new(vec![&a * &a * &q, -(&a * (&p + &q)), p.clone()]);
        assert_eq!(expand_pq_power(&a, 2, &pq).unwrap(), expected);
        let e5 = expand_pq_power(&a, 5, &pq).unwrap();
        assert_eq!(e5.leading_coeff().unwrap(), &rpow(&p, 10).unwrap());
        assert!(expand_pq_power(&a, -1, &pq).is_err());
    }

    #[test]
    fn reversed_is_not_a_sign_flip() {
        let pq = params((2, 1), (1, 1));
        let x = int(1);
        let fwd = PqPowerExpr::forward(int(0), 2, pq.clone())
            .eval(&x)
            .unwrap();
        let rev = PqPowerExpr::reversed(int(0), 2, pq).eval(&x).unwrap();
        assert_eq!(fwd, int(2));
        assert_eq!(rev, int(1));
        assert_ne!(rev, fwd);
    }

    #[test]
    fn derive_examples() {
        let pq = params((2, 1), (1, 2));
        let (c, _) = PqPowerExpr::forward(int(3), 0, pq.clone()).derive();
        assert!(c.is_zero());

        let e = PqPowerExpr::forward(ratio(1, 3), 2, pq.clone());
        let (c, next) = e.derive();
        let via_poly = pq_derive_poly(&e.expand().unwrap(), &pq);
        for x in [ratio(1, 2), int(-3), ratio(5, 7)] {
            assert_eq!(&c * next.eval(&x).unwrap(), via_poly.eval(&x));
        }

        let e = PqPowerExpr::forward(int(1), -1, pq.clone());
        let (c, next) = e.derive();
        for x in [ratio(1, 3), int(3), ratio(-5, 2)] {
            let dq = pq_difference_quotient(|t| e.eval(t), &x, &pq).unwrap();
            assert_eq!(&c * next.eval(&x).unwrap(), dq);
        }
    }

    #[test]
    fn derive_k_examples() {
        let pq = params((2, 1), (1, 2));
        let a = ratio(3, 4);
        let (c, e) = derive_pq_power_k(&a, 4, 0, &pq).unwrap();
        assert_eq!(c, int(1));
        assert_eq!(e, PqPowerExpr::forward(a.clone(), 4, pq.clone()));

        let (c, e) = derive_pq_power_k(&a, 4, 4, &pq).unwrap();
        assert_eq!(e.n, 0);
        assert_eq!(c, rpow(pq.p(), 6).unwrap() * pq_factorial(4, &pq).unwrap());
        // oracle: iterate the single-step rule
        let mut acc = Rational::one();
        let mut cur = PqPowerExpr::forward(a.clone(), 4, pq.clone());
        for _ in 0..4 {
            let (k, next) = cur.derive();
            acc *= k;
            cur = next;
        }
        assert_eq!(acc, c);

        let one_step = PqPowerExpr::forward(a.clone(), 4, pq.clone()).derive();
        assert_eq!(derive_pq_power_k(&a, 4, 1, &pq).unwrap(), one_step);
        assert!(matches!(
            derive_pq_power_k(&a, 4, 5, &pq),
            Err(PqError::OutOfRange(_))
        ));
    }

    #[test]
    fn derive_reversed_examples() {
        let pq = params((3, 1), (-1, 2));
        let a = ratio(2, 5);
        let (c, _) = derive_reversed_k(&a, 3, 0, &pq).unwrap();
        assert_eq!(c, int(1));

        let (c, e) = derive_reversed_k(&a, 3, 1, &pq).unwrap();
        assert_eq!(c, -bracket(3, &pq));
        let f = PqPowerExpr::reversed(a.clone(), 3, pq.clone());
        for x in [ratio(1, 3), int(2), ratio(-7, 4)] {
            let dq = pq_difference_quotient(|t| f.eval(t), &x, &pq).unwrap();
            assert_eq!(&c * e.eval(&x).unwrap(), dq);
        }

        let (c, e) = derive_reversed_k(&a, 3, 3, &pq).unwrap();
        assert_eq!(e.n, 0);
        let expected = -rpow(pq.q(), 3).unwrap() * pq_factorial(3, &pq).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn additive_law_examples() {
        let pq = params((5, 2), (1, 3));
        let (a, x) = (ratio(2, 3), ratio(-1, 4));
        assert!(additive_law_check(&a, 0, 3, &pq, &x).unwrap());
        assert!(additive_law_check(&a, 3, 0, &pq, &x).unwrap());
        assert!(additive_law_check(&a, 2, 3, &pq, &x).unwrap());
        // oracle for the positive case: product of expanded polynomials
        let lhs = expand_pq_power(&a, 5, &pq).unwrap();
        let shifted = PqPowerExpr {
            gamma: rpow(pq.p(), 2).unwrap(),
            a: rpow(pq.q(), 2).unwrap() * &a,
            n: 3,
            orientation: Orientation::XminusA,
            params: pq.clone(),
        };
        let rhs = &expand_pq_power(&a, 2, &pq).unwrap() * &shifted.expand().unwrap();
        assert_eq!(lhs, rhs);
        for (m, n) in [(-2, 3), (2, -3), (-1, -1)] {
            assert!(additive_law_check(&a, m, n, &pq, &x).unwrap());
        }
    }

    #[test]
    fn reciprocal_rules_examples() {
        let pq = params((2, 1), (1, 2));
        let x = ratio(3, 7);
        assert_eq!(
            reciprocal_rules_check(&int(1), 0, &pq, &x).unwrap(),
            [true; 3]
        );
        assert_eq!(
            reciprocal_rules_check(&int(1), 1, &pq, &x).unwrap(),
            [true; 3]
        );
        let pq = params((5, 2), (-1, 3));
        assert_eq!(
            reciprocal_rules_check(&ratio(4, 9), 3, &pq, &ratio(-2, 5)).unwrap(),
            [true; 3]
        );
    }

    #[test]
    fn text_form() {
        let pq = params((2, 1), (1, 2));
        let e = PqPowerExpr::parse("pqpow(a=1,n=3)", &pq).unwrap();
        assert_eq!(e, PqPowerExpr::forward(int(1), 3, pq.clone()));
        let e = PqPowerExpr::parse("pqpowrev(a=-1/2, n=-2, gamma=3/4)", &pq).unwrap();
        assert_eq!(e.orientation, Orientation::AminusX);
        assert_eq!(e.gamma, ratio(3, 4));
        assert_eq!(e.to_string(), "pqpowrev(a=-1/2, n=-2, gamma=3/4)");
        assert_eq!(PqPowerExpr::parse(&e.to_string(), &pq).unwrap(), e);
        assert!(PqPowerExpr::parse("pqpow(n=2)", &pq).is_err());
        assert!(PqPowerExpr::parse("pow(a=1,n=2)", &pq).is_err());
        assert!(PqPowerExpr::parse("pqpow(a=1,n=2.5)", &pq).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| ratio(n, d))
    }

    fn any_params() -> impl Strategy<Value = PqParams> {
        (small_rational(), small_rational())
            .prop_filter_map("valid", |(p, q)| PqParams::new(p, q).ok())
    }

    proptest! {
        #[test]
        fn expand_matches_eval(a in small_rational(), n in 0i64..=7, x in small_rational(),
                               g in small_rational(), rev in any::<bool>(), pq in any_params()) {
            let mut e = PqPowerExpr::forward(a, n, pq).with_gamma(g);
            if rev { e.orientation = Orientation::AminusX; }
            prop_assert_eq!(e.expand().unwrap().eval(&x), e.eval(&x).unwrap());
        }

        #[test]
        fn derivative_coherence(a in small_rational(), n in 1i64..=7, pq in any_params()) {
            let e = PqPowerExpr::forward(a, n, pq.clone());
            let (c, next) = e.derive();
            prop_assert_eq!(pq_derive_poly(&e.expand().unwrap(), &pq), next.expand().unwrap().scale(&c));
        }

        #[test]
        fn derive_k_matches_poly(a in small_rational(), n in 0i64..=6, k in 0i64..=6,
                                 rev in any::<bool>(), pq in any_params()) {
            prop_assume!(k <= n);
            let e = if rev { PqPowerExpr::reversed(a, n, pq.clone()) } else { PqPowerExpr::forward(a, n, pq.clone()) };
            let (c, next) = e.derive_k(k).unwrap();
            let via_poly = pq_derive_poly_k(&e.expand().unwrap(), k as usize, &pq);
            prop_assert_eq!(via_poly, next.expand().unwrap().scale(&c));
        }

        #[test]
        fn coefficient_recursion(a in small_rational(), n in 1i64..=7, k in 0i64..7, pq in any_params()) {
            prop_assume!(k < n);
            let (ck, _) = derive_pq_power_k(&a, n, k, &pq).unwrap();
            let (ck1, _) = derive_pq_power_k(&a, n, k + 1, &pq).unwrap();
            prop_assert_eq!(ck1, ck * rpow(pq.p(), k).unwrap() * bracket(n - k, &pq));
        }

        #[test]
        fn negative_power_consistency(a in small_rational(), n in 0i64..=5, x in small_rational(), pq in any_params()) {
            if let Ok(v) = negative_power_product(&a, n, &pq, &x) {
                prop_assert_eq!(v, int(1));
            }
        }
    }
}
