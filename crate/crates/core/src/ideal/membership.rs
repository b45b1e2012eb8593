//! Exact divisibility and kernels of site sets in `F_p[u_1^±, …, u_d^±]`.
//!
//! Both routines reduce questions about the principal ideal `⟨f⟩` to finite
//! linear algebra through a support bound: if `f·g = h` with `g ≠ 0`, the
//! bounding box of the product is exactly the sum of the factor boxes (the
//! extreme coefficient slices multiply to something nonzero because the ring
//! is a domain), so the quotient support is confined to the erosion of
//! `box(h)` by `box(f)`. That turns "does `f` divide `h`" into one bounded
//! linear solve and "which combinations on these sites land in `⟨f⟩`" into
//! one bounded null-space computation.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{add_mod, mul_mod, ExpVec, FpScalar, LaurentPoly};
use crate::error::{Error, Result};
use crate::ideal::boxes::{erosion_support, IntBox};
use crate::ideal::matrix::{solve_linear, Reduction};

/// Proof that a divisibility held: the exact quotient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MembershipWitness {
    quotient: LaurentPoly,
}

impl MembershipWitness {
    /// The quotient `g` with `f·g = h`.
    pub fn quotient(&self) -> &LaurentPoly {
        &self.quotient
    }

    pub fn into_quotient(self) -> LaurentPoly {
        self.quotient
    }
}

/// A canonical basis of the coefficient combinations on a site set that fall
/// in the ideal of a fixed relation polynomial.
///
/// Row `i`, coordinate `j` is the coefficient attached to `sites()[j]`; the
/// site list is sorted, and the rows are in reduced echelon form, so two
/// bases are equal as subspaces exactly when they are equal as values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KernelBasis {
    modulus: u16,
    sites: Vec<ExpVec>,
    rows: Vec<Vec<FpScalar>>,
}

impl KernelBasis {
    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    /// The site set, sorted lexicographically.
    pub fn sites(&self) -> &[ExpVec] {
        &self.sites
    }

    /// Echelon-form basis rows, one coefficient per site.
    pub fn rows(&self) -> &[Vec<FpScalar>] {
        &self.rows
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }
}

fn check_pair(f: &LaurentPoly, h: &LaurentPoly) -> Result<()> {
    if f.modulus() != h.modulus() {
        return Err(Error::ModulusMismatch(f.modulus(), h.modulus()));
    }
    if f.dim() != h.dim() {
        return Err(Error::DimensionMismatch(f.dim(), h.dim()));
    }
    Ok(())
}

fn support_box(poly: &LaurentPoly) -> IntBox {
    let (lo, hi) = poly.support_bounds().expect("caller rejected zero");
    IntBox::new(lo, hi).expect("support corners are ordered")
}

/// Whether `f` divides `h` in the Laurent ring, with the quotient on success.
///
/// `f` must be nonzero. Zero `h` is divisible by everything; a one-term `f`
/// is a unit times a monomial, so it divides everything by an exponent shift.
/// Otherwise the quotient, if any, is found by solving `f·g = h` for `g`
/// supported on the erosion of `box(h)` by `box(f)`; the solution is unique
/// because the ring has no zero divisors.
pub fn divides(f: &LaurentPoly, h: &LaurentPoly) -> Result<Option<MembershipWitness>> {
    check_pair(f, h)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = f.modulus();
    let dim = f.dim();
    if h.is_zero() {
        return Ok(Some(MembershipWitness {
            quotient: h.clone(),
        }));
    }
    if f.is_monomial() {
        let (fe, fc) = f.terms().next().expect("one term");
        let inv = fc.inv().expect("nonzero in a field");
        let mut terms = Vec::with_capacity(h.num_terms());
        for (he, hc) in h.terms() {
            terms.push((he.checked_sub(fe)?, (hc * inv).value() as i64));
        }
        let quotient = LaurentPoly::from_terms(p as u64, dim, terms)?;
        return Ok(Some(MembershipWitness { quotient }));
    }

    let h_box = support_box(h);
    let f_box = support_box(f);
    let quotient_sites = erosion_support(&h_box, &f_box)?;
    if quotient_sites.is_empty() {
        return Ok(None);
    }
    let col: BTreeMap<&ExpVec, usize> = quotient_sites
        .iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for w in h_box.points() {
        let mut row = vec![0u16; quotient_sites.len()];
        for (fe, fc) in f.terms() {
            // A quotient term at w − fe would feed coefficient w; exponent
            // overflow just means that slot is outside the quotient box.
            if let Ok(e) = w.checked_sub(fe) {
                if let Some(&j) = col.get(&e) {
                    row[j] = fc.value();
                }
            }
        }
        rhs.push(h.coeff(&w).value());
        rows.push(row);
    }
    let Some(solution) = solve_linear(p, quotient_sites.len(), &rows, &rhs) else {
        return Ok(None);
    };
    let quotient = LaurentPoly::from_terms(
        p as u64,
        dim,
        quotient_sites
            .iter()
            .zip(&solution)
            .map(|(e, &c)| (e.clone(), c as i64)),
    )?;
    debug_assert_eq!(crate::algebra::poly_mul(f, &quotient)?, *h);
    Ok(Some(MembershipWitness { quotient }))
}

/// The kernel of a site set: all coefficient rows `b` for which
/// `Σ_s b_s · u^s` is a multiple of `f`.
///
/// Sites must be distinct and share the dimension of `f`, which must be
/// nonzero. The multiples of `f` supported inside the hull of the sites have
/// quotients confined to the erosion of that hull by `box(f)`; the kernel is
/// computed as the null space of "the product vanishes off the sites",
/// pushed forward to coefficient rows by `g ↦ (f·g)|_sites`. That map is
/// injective on the null space, so the dimension is preserved; the rows are
/// then re-reduced to echelon form to make the basis canonical.
pub fn kernel_on_support(f: &LaurentPoly, sites: &[ExpVec]) -> Result<KernelBasis> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if sites.is_empty() {
        return Err(Error::EmptySites);
    }
    let dim = f.dim();
    for s in sites {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch(dim, s.dim()));
        }
    }
    let mut sorted = sites.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    let p = f.modulus();

    let site_box = IntBox::hull(&sorted)?;
    let f_box = support_box(f);
    let unknowns = erosion_support(&site_box, &f_box)?;
    if unknowns.is_empty() {
        return Ok(KernelBasis {
            modulus: p,
            sites: sorted,
            rows: Vec::new(),
        });
    }
    let col: BTreeMap<&ExpVec, usize> = unknowns.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let site_set: BTreeSet<&ExpVec> = sorted.iter().collect();

    // Homogeneous constraints: the product coefficient at every hull point
    // off the site set vanishes.
    let mut rows = Vec::new();
    for w in site_box.points() {
        if site_set.contains(&w) {
            continue;
        }
        let mut row = vec![0u16; unknowns.len()];
        let mut touched = false;
        for (fe, fc) in f.terms() {
            if let Ok(e) = w.checked_sub(fe) {
                if let Some(&j) = col.get(&e) {
                    row[j] = fc.value();
                    touched = true;
                }
            }
        }
        if touched {
            rows.push(row);
        }
    }
    let quotients = Reduction::compute(p, unknowns.len(), rows).kernel_basis();

    let mut images = Vec::with_capacity(quotients.len());
    for g in &quotients {
        let image: Vec<u16> = sorted
            .iter()
            .map(|s| {
                let mut acc = 0u16;
                for (fe, fc) in f.terms() {
                    if let Ok(e) = s.checked_sub(fe) {
                        if let Some(&j) = col.get(&e) {
                            acc = add_mod(acc, mul_mod(fc.value(), g[j], p), p);
                        }
                    }
                }
                acc
            })
            .collect();
        images.push(image);
    }
    let reduced = Reduction::compute(p, sorted.len(), images);
    debug_assert_eq!(reduced.rank(), quotients.len());
    let rows = reduced
        .rows()
        .iter()
        .map(|r| r.iter().map(|&v| FpScalar::from_raw(v, p)).collect())
        .collect();
    Ok(KernelBasis {
        modulus: p,
        sites: sorted,
        rows,
    })
}
