//! Exponent vectors in `Z^d` with a hard coordinate bound.
//!
//! The bound keeps every downstream computation (dilation, Frobenius scaling,
//! support boxes) inside `i64` with room to spare, and turns silent wraparound
//! into an explicit [`Error::ExponentOverflow`].

use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible absolute value of an exponent coordinate.
pub const EXPONENT_BOUND: i64 = 1 << 20;

/// A point of `Z^d`, used both as a monomial exponent and as a lattice site.
///
/// Ordered lexicographically; this order is the canonical term order for
/// polynomials and the canonical site order for every report.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExpVec {
    coords: Vec<i32>,
}

fn check_coord(c: i64) -> Result<i32> {
    if c.abs() > EXPONENT_BOUND {
        Err(Error::ExponentOverflow(c))
    } else {
        Ok(c as i32)
    }
}

impl ExpVec {
    /// Builds a vector, enforcing the coordinate bound.
    pub fn new(coords: Vec<i32>) -> Result<Self> {
        for &c in &coords {
            check_coord(c as i64)?;
        }
        Ok(Self { coords })
    }

    /// The origin of `Z^d`.
    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![0; dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[i32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// Componentwise sum with overflow check.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| check_coord(a as i64 + b as i64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords })
    }

    /// Componentwise difference with overflow check.
    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| check_coord(a as i64 - b as i64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords })
    }

    /// Scalar dilation `k·v` with overflow check.
    pub fn scaled(&self, k: i128) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|&a| {
                let prod = k * a as i128;
                if prod.abs() > EXPONENT_BOUND as i128 {
                    Err(Error::ExponentOverflow(
                        prod.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
                    ))
                } else {
                    Ok(prod as i32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords })
    }
}

impl fmt::Display for ExpVec {
    /// Prints as a parenthesized tuple, e.g. `(0,-2)`; matches the CLI site
    /// grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[i32]) -> ExpVec {
        ExpVec::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn lexicographic_order() {
        assert!(v(&[0, 0]) < v(&[0, 1]));
        assert!(v(&[0, 5]) < v(&[1, -5]));
        assert!(v(&[-1, 9]) < v(&[0, 0]));
    }

    #[test]
    fn arithmetic_and_bounds() {
        let a = v(&[1, -2]);
        let b = v(&[3, 4]);
        assert_eq!(a.checked_add(&b).unwrap(), v(&[4, 2]));
        assert_eq!(a.checked_sub(&b).unwrap(), v(&[-2, -6]));
        assert_eq!(a.scaled(3).unwrap(), v(&[3, -6]));

        let big = v(&[1 << 20, 0]);
        assert!(matches!(
            big.checked_add(&v(&[1, 0])),
            Err(Error::ExponentOverflow(_))
        ));
        assert!(matches!(big.scaled(2), Err(Error::ExponentOverflow(_))));
        assert!(ExpVec::new(vec![(1 << 20) + 1]).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(matches!(
            v(&[1]).checked_add(&v(&[1, 2])),
            Err(Error::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn display_round_trips_the_site_grammar() {
        assert_eq!(v(&[0, -2]).to_string(), "(0,-2)");
        assert_eq!(ExpVec::zero(1).to_string(), "(0)");
    }
}
