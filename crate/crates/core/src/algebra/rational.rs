//! Exact rationals.
//!
//! The only unbounded arithmetic in the crate. Backed by
//! [`num_rational::BigRational`], whose constructor already guarantees the
//! two invariants every consumer relies on: lowest terms and a positive
//! denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number: lowest terms, denominator > 0.
pub type Rational = num_rational::BigRational;

/// `base^e` for a nonzero base and any integer exponent.
///
/// Negative exponents invert; panics only on `0^negative`, which callers rule
/// out (group elements are nonzero).
pub fn rational_pow(base: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mut mag = base.clone();
    if e < 0 {
        assert!(!base.is_zero(), "0 has no negative powers");
        mag = mag.recip();
    }
    let mut acc = Rational::one();
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &mag;
        }
        mag = &mag * &mag;
        n >>= 1;
    }
    acc
}

/// The measure value `p^(-m)` as an exact rational.
pub fn p_neg_power(p: u16, m: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(p).pow(m))
}

/// Integer-valuation of `r` at the prime `q`: the exponent of `q` in `r`.
///
/// `r` must be nonzero; the result is negative when `q` divides the
/// denominator.
pub fn valuation(r: &Rational, q: u64) -> i64 {
    assert!(!r.is_zero());
    let q = BigInt::from(q);
    let mut v = 0i64;
    let mut n = r.numer().abs();
    while (&n % &q).is_zero() {
        n /= &q;
        v += 1;
    }
    let mut d = r.denom().clone();
    while (&d % &q).is_zero() {
        d /= &q;
        v -= 1;
    }
    v
}
