//! The closed set of integrand specs accepted by `pq integrate`.

use std::str::FromStr;

use pqcalc::{NumericFn, Polynomial, PqError};

#[derive(Debug, Clone, PartialEq)]
pub enum FnSpec {
    /// `poly:c0,c1,...`
    Poly(Polynomial),
    /// `recip`: `1/x`
    Recip,
    /// `log`: `ln x`
    Log,
    /// `powneg:r`: `x^{-r}`
    PowNeg(f64),
}

impl FromStr for FnSpec {
    type Err = PqError;

    fn from_str(s: &str) -> Result<Self, PqError> {
        match s.split_once(':') {
            Some(("poly", coeffs)) => Ok(FnSpec::Poly(coeffs.parse()?)),
            Some(("powneg", r)) => {
                let r: f64 = r
                    .trim()
                    .parse()
                    .map_err(|_| PqError::Parse(format!("bad exponent '{r}'")))?;
                if !r.is_finite() {
                    return Err(PqError::NonFinite(r));
                }
                Ok(FnSpec::PowNeg(r))
            }
            None if s == "recip" => Ok(FnSpec::Recip),
            None if s == "log" => Ok(FnSpec::Log),
            _ => Err(PqError::Parse(format!(
                "unknown function '{s}' (expected poly:c0,c1,..., recip, log or powneg:r)"
            ))),
        }
    }
}

impl FnSpec {
    pub fn to_numeric(&self) -> NumericFn {
        match self {
            FnSpec::Poly(p) => NumericFn::from_poly(p),
            FnSpec::Recip => NumericFn::new(|x| 1.0 / x).with_limit_at_infinity(0.0),
            FnSpec::Log => NumericFn::new(f64::ln),
            FnSpec::PowNeg(r) => {
                let r = *r;
                let f = NumericFn::new(move |x: f64| x.powf(-r));
                if r > 0.0 {
                    f.with_limit_at_infinity(0.0)
                } else {
                    f
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_form() {
        assert_eq!(
            "poly:0,1".parse::<FnSpec>().unwrap(),
            FnSpec::Poly(Polynomial::from_ints(&[0, 1]))
        );
        assert_eq!("recip".parse::<FnSpec>().unwrap(), FnSpec::Recip);
        assert_eq!("log".parse::<FnSpec>().unwrap(), FnSpec::Log);
        assert_eq!("powneg:0.5".parse::<FnSpec>().unwrap(), FnSpec::PowNeg(0.5));
        assert!("sin".parse::<FnSpec>().is_err());
        assert!("poly:".parse::<FnSpec>().is_err());
        assert!("powneg:x".parse::<FnSpec>().is_err());
    }

    #[test]
    fn evaluates() {
        let f = "poly:1,0,2".parse::<FnSpec>().unwrap().to_numeric();
        assert_eq!(f.eval(3.0), 19.0);
        let f = "powneg:2".parse::<FnSpec>().unwrap().to_numeric();
        assert_eq!(f.eval(2.0), 0.25);
    }
}
