//! Base arithmetic: prime-field scalars, bounded exponent vectors, sparse
//! Laurent polynomials with a canonical term order, and exact rationals.
//!
//! Design points fixed once here and relied on everywhere above:
//!
//! * moduli are primes `2 ≤ p < 2^16`; all coefficient arithmetic is
//!   machine-word exact,
//! * exponent coordinates are bounded by ±2^20 and every operation that could
//!   leave that range reports [`crate::Error::ExponentOverflow`] instead of
//!   wrapping,
//! * polynomials never store zero coefficients and keep their terms in
//!   lexicographic order, so equal polynomials are structurally equal and
//!   printing is canonical,
//! * negative exponents are first-class (no normalizing shifts).

mod expvec;
mod poly;
mod rational;
mod scalar;
mod text;

pub use expvec::{ExpVec, EXPONENT_BOUND};
pub use poly::{frobenius_power, poly_add, poly_mul, shape_poly, LaurentPoly};
pub use rational::{rational_pow, Rational};
pub use scalar::{is_prime, FpScalar};
pub use text::parse_poly;

pub(crate) use rational::{p_neg_power, valuation};
pub(crate) use scalar::{add_mod, inv_mod, mul_mod, sub_mod, validate_modulus};
