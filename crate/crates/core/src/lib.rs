//! Exact and numeric `(p,q)`-calculus.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalars`]: exact rationals, the `(p,q)` pair, twin-basic numbers `[n]_{p,q}`,
//!   factorials and binomials.
//! - [`polynomials`]: canonical-basis polynomials and the `(p,q)`-derivative, both
//!   exact and on sampled real functions.
//! - [`pqpower`]: the `(p,q)`-power basis `(x ⊖ a)^n` for every integer `n`, its
//!   reversed twin, and their derivative laws.
//! - [`taylor`]: both `(p,q)`-Taylor expansions, the connection formulas and the
//!   Heine-type series.
//! - [`integration`]: antiderivatives and the Jackson-type `(p,q)`-integrals as
//!   truncated lattice series with convergence control.
//! - [`identities`]: a seeded identity suite that cross-checks all of the above.

pub mod error;
pub mod identities;
pub mod integration;
pub mod polynomials;
pub mod pqpower;
pub mod scalars;
pub mod taylor;

pub use error::{PqError, Result};
pub use identities::{run_identities, IdentityConfig, IdentityReport};
pub use integration::{
    antiderive_poly, check_convergence_hypothesis, integral, integral_improper,
    integral_riemann_stieltjes, integral_to_infinity, integral_zero_to, integrate_by_parts,
    newton_leibniz_check, GapReport, IntegralResult, SeriesStatus, TruncationPolicy, UpperLimit,
};
pub use polynomials::{pq_derive_fn, pq_derive_poly, pq_derive_poly_k, NumericFn, Polynomial};
pub use pqpower::{Orientation, PqPowerExpr};
pub use scalars::{
    bracket, bracket_alpha, parse_rational, pq_binomial, pq_factorial, ExactScalar, FloatScalar,
    PqParams, Rational, Regime,
};
pub use taylor::{
    connect_monomial, connect_monomial_reversed, connect_power_to_power, heine_coeff,
    heine_series_eval, q_binomial_reduction_check, taylor_expand, taylor_expand_reversed,
    PowerBasisExpansion,
};
