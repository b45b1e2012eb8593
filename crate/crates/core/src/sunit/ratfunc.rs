//! Rational functions over `F_p(t)` and Frobenius orbits of unit-equation
//! solutions.
//!
//! This is the characteristic-`p` side of the dichotomy: from one solution
//! `(x_1, …, x_k)` of `Σ x_j = 1` the Frobenius endomorphism manufactures
//! infinitely many more, because `q ↦ q^(p^n)` is additive in characteristic
//! `p` and fixes `1`. Nothing comparable exists over `Q`, where the solution
//! set inside any exponent box is finite once degenerate families are set
//! aside.

use std::fmt;

use crate::error::{Error, Result};
use crate::sunit::fppoly::FpPoly;

/// A reduced fraction of polynomials in `F_p(t)`.
///
/// Invariants: the denominator is monic and coprime to the numerator, and
/// zero is stored as `0/1` — so equal values are structurally equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RatFunc {
    num: FpPoly,
    den: FpPoly,
}

impl RatFunc {
    /// Builds `num/den`, reducing to canonical form. The denominator must be
    /// nonzero.
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if num.modulus() != den.modulus() {
            return Err(Error::ModulusMismatch(num.modulus(), den.modulus()));
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self {
                num,
                den: FpPoly::one(den.modulus() as u64)?,
            });
        }
        let g = num.gcd(&den)?;
        let (num, _) = num.divrem(&g)?;
        let (den, _) = den.divrem(&g)?;
        // Shift the denominator's leading unit into the numerator.
        let scale = den
            .coeff(den.degree().expect("nonzero"))
            .inv()
            .expect("nonzero lead");
        let unit = FpPoly::from_coeffs(num.modulus() as u64, &[i64::from(scale.value())])?;
        Ok(Self {
            num: num.mul(&unit)?,
            den: den.monic(),
        })
    }

    pub fn from_poly(poly: FpPoly) -> Self {
        let den = FpPoly::one(poly.modulus() as u64).expect("validated modulus");
        Self { num: poly, den }
    }

    pub fn zero(modulus: u64) -> Result<Self> {
        Ok(Self::from_poly(FpPoly::zero(modulus)?))
    }

    pub fn one(modulus: u64) -> Result<Self> {
        Ok(Self::from_poly(FpPoly::one(modulus)?))
    }

    pub fn modulus(&self) -> u16 {
        self.num.modulus()
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        Self::new(num, self.den.mul(&other.den)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Self::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    /// The Frobenius power `self^(p^n)`: exponent dilation on both sides of
    /// the fraction. Coprimality and monicity survive, so no re-reduction is
    /// needed.
    pub fn frobenius(&self, n: u32) -> Result<Self> {
        Ok(Self {
            num: self.num.frobenius(n)?,
            den: self.den.frobenius(n)?,
        })
    }

    /// Parses `num`, `num/den`, or the parenthesized forms `(num)/(den)`.
    pub fn parse(text: &str, modulus: u64) -> Result<Self> {
        fn strip_parens(piece: &str) -> &str {
            let trimmed = piece.trim();
            let inner = trimmed
                .strip_prefix('(')
                .and_then(|rest| rest.strip_suffix(')'))
                .unwrap_or(trimmed);
            // Only strip when the leading '(' really matches the final ')'.
            if trimmed.len() != inner.len() && inner.contains(['(', ')']) {
                trimmed
            } else {
                inner
            }
        }
        match text.split_once('/') {
            None => Ok(Self::from_poly(FpPoly::parse(strip_parens(text), modulus)?)),
            Some((num, den)) => {
                if den.contains('/') {
                    return Err(Error::Parse {
                        pos: text.find('/').expect("split found one"),
                        msg: "at most one '/' is allowed".into(),
                    });
                }
                Self::new(
                    FpPoly::parse(strip_parens(num), modulus)?,
                    FpPoly::parse(strip_parens(den), modulus)?,
                )
            }
        }
    }
}

impl fmt::Display for RatFunc {
    /// `num` for polynomials, `(num)/(den)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// The Frobenius orbit of a solution tuple: entry `n` is the component-wise
/// `p^n`-th power, for `n = 0, …, steps`.
///
/// If the input satisfies `Σ_j x_j = 1`, so does every entry — that is the
/// freshman's-dream identity `(Σ x_j)^(p^n) = Σ x_j^(p^n)` — and for any
/// non-constant component the entries are pairwise distinct, so one solution
/// seeds infinitely many. Tuples need at least two components and a shared
/// modulus.
pub fn frobenius_orbit(base: &[RatFunc], steps: u32) -> Result<Vec<Vec<RatFunc>>> {
    if base.len() < 2 {
        return Err(Error::TooFewTerms);
    }
    for value in &base[1..] {
        if value.modulus() != base[0].modulus() {
            return Err(Error::ModulusMismatch(base[0].modulus(), value.modulus()));
        }
    }
    let mut orbit = Vec::with_capacity(steps as usize + 1);
    orbit.push(base.to_vec());
    for _ in 0..steps {
        let last = orbit.last().expect("seeded");
        let next: Vec<RatFunc> = last.iter().map(|v| v.frobenius(1)).collect::<Result<_>>()?;
        orbit.push(next);
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(text: &str, p: u64) -> RatFunc {
        RatFunc::parse(text, p).unwrap()
    }

    #[test]
    fn construction_reduces_to_lowest_terms() {
        // (t^2 + t) / (2t) = (t+1)·t / (2·t) over F_5 → 3·(t+1).
        let num = FpPoly::parse("t^2 + t", 5).unwrap();
        let den = FpPoly::parse("2*t", 5).unwrap();
        let v = RatFunc::new(num, den).unwrap();
        assert_eq!(v, rf("3*t + 3", 5));
        assert!(v.den().is_one());
    }

    #[test]
    fn denominators_are_made_monic() {
        let v = rf("(t)/(2*t + 2)", 5);
        assert_eq!(v.den(), &FpPoly::parse("t + 1", 5).unwrap());
        assert_eq!(v.num(), &FpPoly::parse("3*t", 5).unwrap());
        assert!(RatFunc::parse("(1)/(0)", 5).is_err());
    }

    #[test]
    fn zero_is_canonical() {
        let v = rf("(0)/(t^3 + 1)", 2);
        assert!(v.is_zero());
        assert!(v.den().is_one());
        assert_eq!(v, RatFunc::zero(2).unwrap());
    }

    #[test]
    fn addition_finds_common_denominators() {
        // t/(t+1) + 1/(t+1) = 1 over F_2.
        let a = rf("(t)/(t + 1)", 2);
        let b = rf("(1)/(t + 1)", 2);
        assert!(a.add(&b).unwrap().is_one());
        // t + (t+1) = 1 in characteristic two.
        assert!(rf("t", 2).add(&rf("t + 1", 2)).unwrap().is_one());
    }

    #[test]
    fn frobenius_is_multiplicative_dilation() {
        let v = rf("(t)/(t + 1)", 2);
        let squared = v.mul(&v).unwrap();
        assert_eq!(v.frobenius(1).unwrap(), squared);
        assert_eq!(v.frobenius(2).unwrap(), squared.mul(&squared).unwrap());
    }

    #[test]
    fn orbit_preserves_the_unit_sum() {
        let base = vec![rf("t", 2), rf("t + 1", 2)];
        let orbit = frobenius_orbit(&base, 10).unwrap();
        assert_eq!(orbit.len(), 11);
        for tuple in &orbit {
            let sum = tuple[0].add(&tuple[1]).unwrap();
            assert!(sum.is_one());
        }
        // Entries are pairwise distinct: degrees strictly grow.
        for pair in orbit.windows(2) {
            assert_ne!(pair[0], pair[1]);
        }
        assert_eq!(orbit[10][0], rf("t^1024", 2));
    }

    #[test]
    fn orbit_validates_inputs() {
        assert!(matches!(
            frobenius_orbit(&[rf("t", 2)], 3),
            Err(Error::TooFewTerms)
        ));
        let mixed = vec![rf("t", 2), rf("t", 3)];
        assert!(matches!(
            frobenius_orbit(&mixed, 3),
            Err(Error::ModulusMismatch(2, 3))
        ));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["0", "1", "t", "(t)/(t + 1)", "(t^2 + 1)/(t^3 + t)"] {
            let v = rf(text, 5);
            assert_eq!(RatFunc::parse(&v.to_string(), 5).unwrap(), v);
        }
        assert_eq!(rf("(t)/(t+1)", 2).to_string(), "(t)/(t + 1)");
        assert_eq!(rf("t/1", 3).to_string(), "t");
        assert!(RatFunc::parse("t/t/t", 2).is_err());
    }
}
