//! Sparse Laurent polynomials over `F_p` in `d` commuting variables.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so the term order is
//! always the lexicographic one, zero coefficients are never stored, and two
//! equal polynomials are structurally equal. Negative exponents are ordinary
//! citizens — nothing is ever shifted to make exponents nonnegative.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::expvec::ExpVec;
use crate::algebra::scalar::{add_mod, mul_mod, validate_modulus, FpScalar};
use crate::error::{Error, Result};

/// A Laurent polynomial `Σ c_e · u^e` with `c_e ∈ F_p`, `e ∈ Z^d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    modulus: u16,
    dim: usize,
    /// Invariant: every stored residue is in `[1, p)`.
    terms: BTreeMap<ExpVec, u16>,
}

impl LaurentPoly {
    /// The zero polynomial of `F_p[u_1^±, …, u_d^±]`.
    pub fn zero(modulus: u64, dim: usize) -> Result<Self> {
        let p = validate_modulus(modulus)?;
        Ok(Self {
            modulus: p,
            dim,
            terms: BTreeMap::new(),
        })
    }

    /// The constant polynomial `1`.
    pub fn one(modulus: u64, dim: usize) -> Result<Self> {
        Self::from_terms(modulus, dim, [(ExpVec::zero(dim), 1)])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs.
    ///
    /// Coefficients are reduced mod `p`, repeated exponents accumulate, and
    /// zero terms are dropped.
    pub fn from_terms(
        modulus: u64,
        dim: usize,
        terms: impl IntoIterator<Item = (ExpVec, i64)>,
    ) -> Result<Self> {
        let p = validate_modulus(modulus)?;
        let mut map: BTreeMap<ExpVec, u16> = BTreeMap::new();
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(dim, e.dim()));
            }
            let r = c.rem_euclid(p as i64) as u16;
            let entry = map.entry(e).or_insert(0);
            *entry = add_mod(*entry, r, p);
        }
        map.retain(|_, &mut c| c != 0);
        Ok(Self {
            modulus: p,
            dim,
            terms: map,
        })
    }

    /// A single term `c · u^e`; the zero polynomial when `c ≡ 0`.
    pub fn monomial(coeff: FpScalar, exp: ExpVec) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp.clone(), coeff.value());
        }
        Self {
            modulus: coeff.modulus(),
            dim: exp.dim(),
            terms,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the polynomial is a unit of the Laurent ring: one term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Coefficient at `e` (zero if absent).
    pub fn coeff(&self, e: &ExpVec) -> FpScalar {
        FpScalar::from_raw(self.terms.get(e).copied().unwrap_or(0), self.modulus)
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, FpScalar)> + '_ {
        self.terms
            .iter()
            .map(|(e, &c)| (e, FpScalar::from_raw(c, self.modulus)))
    }

    /// The support as a sorted site list.
    pub fn support(&self) -> Vec<ExpVec> {
        self.terms.keys().cloned().collect()
    }

    /// Componentwise bounding box `(lo, hi)` of the support; `None` for zero.
    pub fn support_bounds(&self) -> Option<(ExpVec, ExpVec)> {
        let mut iter = self.terms.keys();
        let first = iter.next()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for e in iter {
            for (i, &c) in e.coords().iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        Some((
            ExpVec::new(lo).expect("bounded"),
            ExpVec::new(hi).expect("bounded"),
        ))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

/// Exact sum in `F_p[u^±]`.
pub fn poly_add(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    a.check_compatible(b)?;
    let p = a.modulus;
    let mut terms = a.terms.clone();
    for (e, &c) in &b.terms {
        let entry = terms.entry(e.clone()).or_insert(0);
        *entry = add_mod(*entry, c, p);
    }
    terms.retain(|_, &mut c| c != 0);
    Ok(LaurentPoly {
        modulus: p,
        dim: a.dim,
        terms,
    })
}

/// Exact product in `F_p[u^±]`, with exponent-overflow checks on every
/// combined exponent.
pub fn poly_mul(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    a.check_compatible(b)?;
    let p = a.modulus;
    let mut terms: BTreeMap<ExpVec, u16> = BTreeMap::new();
    for (ea, &ca) in &a.terms {
        for (eb, &cb) in &b.terms {
            let e = ea.checked_add(eb)?;
            let c = mul_mod(ca, cb, p);
            let entry = terms.entry(e).or_insert(0);
            *entry = add_mod(*entry, c, p);
        }
    }
    terms.retain(|_, &mut c| c != 0);
    Ok(LaurentPoly {
        modulus: p,
        dim: a.dim,
        terms,
    })
}

/// The Frobenius power `h^(p^n)` for `n ≥ 1`.
///
/// In characteristic `p` this is exponent dilation: every exponent scales by
/// `p^n` and every coefficient is fixed (`c^p = c` in `F_p`), so the result
/// has exactly the same number of terms as `h`.
pub fn frobenius_power(h: &LaurentPoly, n: u32) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::ZeroDilation);
    }
    if h.is_zero() {
        return Ok(h.clone());
    }
    let scale = (h.modulus as i128)
        .checked_pow(n)
        .ok_or(Error::ExponentOverflow(i64::MAX))?;
    let mut terms = BTreeMap::new();
    for (e, &c) in &h.terms {
        terms.insert(e.scaled(scale)?, c);
    }
    Ok(LaurentPoly {
        modulus: h.modulus,
        dim: h.dim,
        terms,
    })
}

/// The dilated shape polynomial `Σ_j c_j · u^(n·s_j)`.
///
/// `shape` points must be distinct, `coeffs` aligned with them and not all
/// zero, and `n ≥ 1`; zero coefficients simply contribute no term.
pub fn shape_poly(shape: &[ExpVec], coeffs: &[FpScalar], n: u32) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::ZeroDilation);
    }
    if shape.is_empty() {
        return Err(Error::TooFewPoints(1));
    }
    if shape.len() != coeffs.len() {
        return Err(Error::LengthMismatch {
            left: shape.len(),
            right: coeffs.len(),
        });
    }
    let dim = shape[0].dim();
    for s in shape {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch(dim, s.dim()));
        }
    }
    let p = coeffs[0].modulus();
    for c in coeffs {
        if c.modulus() != p {
            return Err(Error::ModulusMismatch(p, c.modulus()));
        }
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::AllZeroCoefficients);
    }
    let mut terms = BTreeMap::new();
    for (s, c) in shape.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let e = s.scaled(n as i128)?;
        if terms.insert(e, c.value()).is_some() {
            return Err(Error::DuplicatePoints);
        }
    }
    Ok(LaurentPoly {
        modulus: p,
        dim,
        terms,
    })
}

impl fmt::Display for LaurentPoly {
    /// Canonical text form: terms in lexicographic exponent order, joined by
    /// ` + `, coefficients already reduced into `[1, p)`. Parsed back by
    /// [`crate::algebra::parse_poly`] this reproduces the polynomial exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut vars = String::new();
            for (j, &exp) in e.coords().iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                vars.push('u');
                vars.push_str(&(j + 1).to_string());
                if exp != 1 {
                    vars.push('^');
                    vars.push_str(&exp.to_string());
                }
            }
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{c}*{vars}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[i32]) -> ExpVec {
        ExpVec::new(coords.to_vec()).unwrap()
    }

    /// `1 + u1 + u2` over `F_2` — the running three-term relation.
    fn ledrappier() -> LaurentPoly {
        LaurentPoly::from_terms(2, 2, [(v(&[0, 0]), 1), (v(&[1, 0]), 1), (v(&[0, 1]), 1)]).unwrap()
    }

    #[test]
    fn addition_cancels_in_characteristic_two() {
        let f = ledrappier();
        let sum = poly_add(&f, &f).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn addition_accumulates_mod_p() {
        let a = LaurentPoly::from_terms(3, 1, [(v(&[0]), 2), (v(&[1]), 1)]).unwrap();
        let b = LaurentPoly::from_terms(3, 1, [(v(&[0]), 1), (v(&[1]), 1)]).unwrap();
        let sum = poly_add(&a, &b).unwrap();
        // 2+1 ≡ 0 kills the constant term; u^1 keeps coefficient 2.
        assert_eq!(sum, LaurentPoly::from_terms(3, 1, [(v(&[1]), 2)]).unwrap());
    }

    #[test]
    fn multiplication_squares_the_relation_dyadically() {
        let f = ledrappier();
        let sq = poly_mul(&f, &f).unwrap();
        let expected =
            LaurentPoly::from_terms(2, 2, [(v(&[0, 0]), 1), (v(&[2, 0]), 1), (v(&[0, 2]), 1)])
                .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn multiplication_in_characteristic_three_keeps_cross_terms() {
        let f = LaurentPoly::from_terms(3, 2, [(v(&[0, 0]), 1), (v(&[1, 0]), 1), (v(&[0, 1]), 1)])
            .unwrap();
        let sq = poly_mul(&f, &f).unwrap();
        // (1+x+y)^2 = 1 + 2x + 2y + x^2 + 2xy + y^2 over F_3.
        let expected = LaurentPoly::from_terms(
            3,
            2,
            [
                (v(&[0, 0]), 1),
                (v(&[1, 0]), 2),
                (v(&[0, 1]), 2),
                (v(&[2, 0]), 1),
                (v(&[1, 1]), 2),
                (v(&[0, 2]), 1),
            ],
        )
        .unwrap();
        assert_eq!(sq, expected);
        // Cube collapses to the pure dilate.
        let cube = poly_mul(&sq, &f).unwrap();
        let pure =
            LaurentPoly::from_terms(3, 2, [(v(&[0, 0]), 1), (v(&[3, 0]), 1), (v(&[0, 3]), 1)])
                .unwrap();
        assert_eq!(cube, pure);
    }

    #[test]
    fn negative_exponents_multiply_without_shifting() {
        let a = LaurentPoly::from_terms(5, 1, [(v(&[-3]), 2)]).unwrap();
        let b = LaurentPoly::from_terms(5, 1, [(v(&[1]), 3), (v(&[4]), 1)]).unwrap();
        let prod = poly_mul(&a, &b).unwrap();
        assert_eq!(
            prod,
            LaurentPoly::from_terms(5, 1, [(v(&[-2]), 1), (v(&[1]), 2)]).unwrap()
        );
    }

    #[test]
    fn frobenius_scales_exponents_only() {
        let f = ledrappier();
        let f2 = frobenius_power(&f, 1).unwrap();
        assert_eq!(f2, poly_mul(&f, &f).unwrap());
        let f8 = frobenius_power(&f, 3).unwrap();
        let expected =
            LaurentPoly::from_terms(2, 2, [(v(&[0, 0]), 1), (v(&[8, 0]), 1), (v(&[0, 8]), 1)])
                .unwrap();
        assert_eq!(f8, expected);
        assert!(frobenius_power(&f, 0).is_err());
    }

    #[test]
    fn frobenius_agrees_with_iterated_multiplication() {
        // Independent route: literal repeated multiplication h^(p^n).
        let cases = [
            LaurentPoly::from_terms(2, 2, [(v(&[0, 0]), 1), (v(&[1, 1]), 1), (v(&[-1, 0]), 1)])
                .unwrap(),
            LaurentPoly::from_terms(2, 1, [(v(&[0]), 1), (v(&[3]), 1)]).unwrap(),
        ];
        for h in &cases {
            for n in 1..=3u32 {
                let direct = frobenius_power(h, n).unwrap();
                let mut slow = LaurentPoly::one(2, h.dim()).unwrap();
                for _ in 0..(2u32.pow(n)) {
                    slow = poly_mul(&slow, h).unwrap();
                }
                assert_eq!(direct, slow, "n={n}");
            }
        }
        // One odd-characteristic case: p=3, n=1 → h^3.
        let h = LaurentPoly::from_terms(3, 1, [(v(&[0]), 2), (v(&[2]), 1)]).unwrap();
        let direct = frobenius_power(&h, 1).unwrap();
        let slow = poly_mul(&poly_mul(&h, &h).unwrap(), &h).unwrap();
        assert_eq!(direct, slow);
    }

    #[test]
    fn frobenius_overflow_is_reported() {
        let h = LaurentPoly::from_terms(2, 1, [(v(&[1]), 1)]).unwrap();
        assert!(matches!(
            frobenius_power(&h, 21),
            Err(Error::ExponentOverflow(_))
        ));
        // A constant survives any n: no exponent actually scales.
        let c = LaurentPoly::one(2, 1).unwrap();
        assert_eq!(frobenius_power(&c, 21).unwrap(), c);
    }

    #[test]
    fn shape_poly_builds_dilates() {
        let shape = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1])];
        let one = FpScalar::one(2).unwrap();
        let poly = shape_poly(&shape, &[one, one, one], 4).unwrap();
        let expected =
            LaurentPoly::from_terms(2, 2, [(v(&[0, 0]), 1), (v(&[4, 0]), 1), (v(&[0, 4]), 1)])
                .unwrap();
        assert_eq!(poly, expected);

        let zero = FpScalar::zero(2).unwrap();
        let partial = shape_poly(&shape, &[one, zero, one], 2).unwrap();
        assert_eq!(partial.num_terms(), 2);

        assert!(matches!(
            shape_poly(&shape, &[zero, zero, zero], 1),
            Err(Error::AllZeroCoefficients)
        ));
        assert!(matches!(
            shape_poly(&shape, &[one, one, one], 0),
            Err(Error::ZeroDilation)
        ));
        assert!(matches!(
            shape_poly(&[v(&[0, 0]), v(&[0, 0])], &[one, one], 1),
            Err(Error::DuplicatePoints)
        ));
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let h = LaurentPoly::from_terms(2, 1, [(v(&[0]), 2), (v(&[1]), 4), (v(&[2]), 1)]).unwrap();
        assert_eq!(h.num_terms(), 1);
        assert!(h.coeff(&v(&[0])).is_zero());
        assert_eq!(h.coeff(&v(&[2])).value(), 1);
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        let a = LaurentPoly::one(2, 2).unwrap();
        let b = LaurentPoly::one(3, 2).unwrap();
        let c = LaurentPoly::one(2, 1).unwrap();
        assert!(matches!(
            poly_add(&a, &b),
            Err(Error::ModulusMismatch(2, 3))
        ));
        assert!(matches!(
            poly_mul(&a, &c),
            Err(Error::DimensionMismatch(2, 1))
        ));
    }

    #[test]
    fn display_is_canonical() {
        let f = ledrappier();
        assert_eq!(f.to_string(), "1 + u2 + u1");
        let g = LaurentPoly::from_terms(5, 2, [(v(&[-3, 1]), 2), (v(&[0, 0]), 1)]).unwrap();
        assert_eq!(g.to_string(), "2*u1^-3*u2 + 1");
        assert_eq!(LaurentPoly::zero(2, 2).unwrap().to_string(), "0");
    }
}
