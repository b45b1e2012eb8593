//! Scalars in `F_p` for a machine-word prime `p`, plus the raw residue
//! helpers the linear-algebra kernels use on bare `u16`s.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Deterministic primality test for the supported modulus range.
///
/// Plain trial division; the largest admissible modulus is 65521 so the loop
/// is at most 127 steps.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Checks `2 ≤ p < 2^16` and primality, returning the modulus as `u16`.
pub(crate) fn validate_modulus(p: u64) -> Result<u16> {
    if p >= (1 << 16) || !is_prime(p) {
        return Err(Error::InvalidModulus(p));
    }
    Ok(p as u16)
}

#[inline]
pub(crate) fn add_mod(a: u16, b: u16, p: u16) -> u16 {
    (((a as u32) + (b as u32)) % (p as u32)) as u16
}

#[inline]
pub(crate) fn sub_mod(a: u16, b: u16, p: u16) -> u16 {
    (((a as u32) + (p as u32) - (b as u32)) % (p as u32)) as u16
}

#[inline]
pub(crate) fn neg_mod(a: u16, p: u16) -> u16 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub(crate) fn mul_mod(a: u16, b: u16, p: u16) -> u16 {
    (((a as u32) * (b as u32)) % (p as u32)) as u16
}

/// Multiplicative inverse of a nonzero residue, by extended Euclid.
pub(crate) fn inv_mod(a: u16, p: u16) -> u16 {
    debug_assert!(a != 0 && a < p);
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "modulus must be prime");
    t0.rem_euclid(p as i64) as u16
}

/// An element of `F_p`: a reduced residue tagged with its prime modulus.
///
/// Arithmetic between scalars of different moduli is a programming error and
/// panics; all public constructors validate the modulus, so mixed-modulus
/// values cannot arise from checked input.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    residue: u16,
    modulus: u16,
}

impl FpScalar {
    /// Reduces `value` into `[0, p)` for a validated prime modulus.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        let p = validate_modulus(modulus)?;
        Ok(Self {
            residue: value.rem_euclid(p as i64) as u16,
            modulus: p,
        })
    }

    /// Zero of `F_p`.
    pub fn zero(modulus: u64) -> Result<Self> {
        Self::new(0, modulus)
    }

    /// One of `F_p`.
    pub fn one(modulus: u64) -> Result<Self> {
        Self::new(1, modulus)
    }

    /// Wraps an already-reduced residue under an already-validated modulus.
    #[inline]
    pub(crate) fn from_raw(residue: u16, modulus: u16) -> Self {
        debug_assert!(residue < modulus);
        Self { residue, modulus }
    }

    /// The reduced residue in `[0, p)`.
    #[inline]
    pub fn value(self) -> u16 {
        self.residue
    }

    /// The prime modulus.
    #[inline]
    pub fn modulus(self) -> u16 {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.residue == 0 {
            None
        } else {
            Some(Self::from_raw(
                inv_mod(self.residue, self.modulus),
                self.modulus,
            ))
        }
    }

    /// Exponentiation by squaring; `0^0 = 1`.
    pub fn pow(self, mut e: u64) -> Self {
        let p = self.modulus;
        let mut base = self.residue;
        let mut acc = 1u16 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base, p);
            }
            base = mul_mod(base, base, p);
            e >>= 1;
        }
        Self::from_raw(acc, p)
    }

    #[inline]
    fn assert_same_modulus(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "F_p arithmetic across moduli {} and {}",
            self.modulus, other.modulus
        );
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        self.assert_same_modulus(rhs);
        FpScalar::from_raw(
            add_mod(self.residue, rhs.residue, self.modulus),
            self.modulus,
        )
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        self.assert_same_modulus(rhs);
        FpScalar::from_raw(
            sub_mod(self.residue, rhs.residue, self.modulus),
            self.modulus,
        )
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        self.assert_same_modulus(rhs);
        FpScalar::from_raw(
            mul_mod(self.residue, rhs.residue, self.modulus),
            self.modulus,
        )
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar::from_raw(neg_mod(self.residue, self.modulus), self.modulus)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl fmt::Debug for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}
