//! Shared inputs for the criterion benches.

use pqcalc::{Polynomial, PqParams};

/// A dense degree-`n` polynomial with small rational coefficients.
pub fn sample_poly(n: usize) -> Polynomial {
    let coeffs = (0..=n as i64)
        .map(|i| pqcalc::scalars::ratio((i % 7) - 3, (i % 5) + 1))
        .collect();
    Polynomial::new(coeffs)
}

pub fn sample_params() -> PqParams {
    PqParams::from_ratios((5, 2), (1, 3)).expect("valid pair")
}
