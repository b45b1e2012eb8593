//! Higher-order mixing defects along dilated shapes.
//!
//! Fix a shape `{s_1, …, s_k}` in `Z^d`. If the system mixed on `k` sets,
//! the measure of `⋂_j σ^(n·s_j) A_j` would approach `Π_j μ(A_j)` as `n`
//! grows. In characteristic `p` that convergence can fail along arithmetic
//! subsequences: whenever some combination `Σ_j c_j · u^(n·s_j)` falls into
//! the relation ideal, the dilated coordinates obey a linear identity and
//! the joint measure jumps. The scans here compute both sides exactly for
//! every `n` in a range and report the difference, together with the
//! dimension of the space of such identities — so "mixing fails at `n`"
//! always arrives with an explicit algebraic witness, never as a numerical
//! artifact.

use rayon::prelude::*;

use crate::algebra::{shape_poly, ExpVec, FpScalar, LaurentPoly, Rational};
use crate::error::{Error, Result};
use crate::haar::{cylinder_measure, CylinderSpec, SystemSpec};
use crate::ideal::{divides, kernel_on_support};

/// A finite set of at least two distinct points of `Z^d`, kept sorted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shape {
    points: Vec<ExpVec>,
}

impl Shape {
    pub fn new(points: Vec<ExpVec>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints(2));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
        }
        let mut points = points;
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        Ok(Self { points })
    }

    /// The points in sorted order; witness coefficients align with this.
    pub fn points(&self) -> &[ExpVec] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// The points scaled by `n ≥ 1`; scaling preserves order and
    /// distinctness.
    fn dilated(&self, n: u32) -> Result<Vec<ExpVec>> {
        self.points
            .iter()
            .map(|p| p.scaled(i128::from(n)))
            .collect()
    }
}

/// One row of a dilation scan: both sides of the mixing comparison at `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DefectRecord {
    pub n: u32,
    /// Measure of the intersection of the dilated cylinders.
    pub joint: Rational,
    /// Product of the individual cylinder measures.
    pub product: Rational,
    /// `joint − product`; zero exactly when this `n` looks mixing.
    pub defect: Rational,
    /// Dimension of the space of linear identities on the dilated sites.
    pub witness_dim: usize,
}

/// Witness dimension at a single `n`, for witness-only scans.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WitnessRecord {
    pub n: u32,
    pub witness_dim: usize,
}

/// An explicit identity certifying a mixing defect at `n`: coefficients on
/// the dilated shape whose combination is a multiple of the relation, plus
/// the exact quotient proving it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShapeWitness {
    pub n: u32,
    /// One coefficient per shape point, in shape (sorted) order.
    pub coeffs: Vec<FpScalar>,
    /// `Σ_j coeffs_j · u^(n·s_j) = relation · quotient`.
    pub quotient: LaurentPoly,
}

fn check_system_shape(system: &SystemSpec, shape: &Shape) -> Result<()> {
    if system.dim() != shape.dim() {
        return Err(Error::DimensionMismatch(system.dim(), shape.dim()));
    }
    Ok(())
}

fn check_range(lo: u32, hi: u32) -> Result<()> {
    if lo == 0 {
        return Err(Error::ZeroDilation);
    }
    if lo > hi {
        return Err(Error::EmptyRange);
    }
    Ok(())
}

/// The canonical witness at dilation `n`, if any: the first echelon basis
/// row of the kernel on the dilated sites, with its divisibility proof.
pub fn shape_witness(system: &SystemSpec, shape: &Shape, n: u32) -> Result<Option<ShapeWitness>> {
    check_system_shape(system, shape)?;
    if n == 0 {
        return Err(Error::ZeroDilation);
    }
    let sites = shape.dilated(n)?;
    let kernel = kernel_on_support(system.relation(), &sites)?;
    let Some(row) = kernel.rows().first() else {
        return Ok(None);
    };
    let coeffs = row.clone();
    let member = shape_poly(shape.points(), &coeffs, n)?;
    let witness = divides(system.relation(), &member)?
        .expect("kernel rows are multiples of the relation by construction");
    Ok(Some(ShapeWitness {
        n,
        coeffs,
        quotient: witness.into_quotient(),
    }))
}

/// Joint-versus-product comparison for every `n` in `[lo, hi]`.
///
/// The `j`-th cylinder pins the origin to `values[j]` and is shifted to the
/// dilated point `n·s_j`, so the joint event pins all dilated sites at once
/// while the product side treats them independently. Values must match the
/// shape in length and the system in modulus. Work is spread across the
/// global thread pool; records come back in increasing `n`.
pub fn dilation_scan(
    system: &SystemSpec,
    shape: &Shape,
    values: &[FpScalar],
    lo: u32,
    hi: u32,
) -> Result<Vec<DefectRecord>> {
    check_system_shape(system, shape)?;
    check_range(lo, hi)?;
    if values.len() != shape.len() {
        return Err(Error::LengthMismatch {
            left: shape.len(),
            right: values.len(),
        });
    }
    for value in values {
        if value.modulus() != system.modulus() {
            return Err(Error::ModulusMismatch(system.modulus(), value.modulus()));
        }
    }
    let p = u64::from(system.modulus());
    (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let sites = shape.dilated(n)?;
            let joint_cylinder = CylinderSpec::new(
                p,
                shape.dim(),
                sites
                    .iter()
                    .zip(values)
                    .map(|(s, v)| (s.clone(), i64::from(v.value()))),
            )?;
            let joint = cylinder_measure(system, &joint_cylinder)?;
            let mut product = Rational::from_integer(1.into());
            for (site, value) in sites.iter().zip(values) {
                let single =
                    CylinderSpec::new(p, shape.dim(), [(site.clone(), i64::from(value.value()))])?;
                product *= cylinder_measure(system, &single)?.value().clone();
            }
            let witness_dim = kernel_on_support(system.relation(), &sites)?.dimension();
            let joint = joint.value().clone();
            let defect = &joint - &product;
            Ok(DefectRecord {
                n,
                joint,
                product,
                defect,
                witness_dim,
            })
        })
        .collect()
}

/// Witness dimensions for every `n` in `[lo, hi]`, without measures.
pub fn witness_scan(
    system: &SystemSpec,
    shape: &Shape,
    lo: u32,
    hi: u32,
) -> Result<Vec<WitnessRecord>> {
    check_system_shape(system, shape)?;
    check_range(lo, hi)?;
    (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let sites = shape.dilated(n)?;
            let witness_dim = kernel_on_support(system.relation(), &sites)?.dimension();
            Ok(WitnessRecord { n, witness_dim })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, poly_mul};
    use num_traits::Zero;

    fn v(coords: &[i32]) -> ExpVec {
        ExpVec::new(coords.to_vec()).unwrap()
    }

    fn system(text: &str, p: u64, dim: usize) -> SystemSpec {
        SystemSpec::new(parse_poly(text, p, dim).unwrap()).unwrap()
    }

    fn triangle() -> Shape {
        Shape::new(vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap()
    }

    fn zeros(p: u64, k: usize) -> Vec<FpScalar> {
        vec![FpScalar::zero(p).unwrap(); k]
    }

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(num.into(), den.into())
    }

    #[test]
    fn shape_sorts_and_validates() {
        let s = Shape::new(vec![v(&[1, 0]), v(&[0, 0])]).unwrap();
        assert_eq!(s.points(), &[v(&[0, 0]), v(&[1, 0])]);
        assert!(Shape::new(vec![v(&[0, 0])]).is_err());
        assert!(Shape::new(vec![v(&[0, 0]), v(&[0, 0])]).is_err());
        assert!(Shape::new(vec![v(&[0, 0]), v(&[0])]).is_err());
    }

    #[test]
    fn triangle_defect_follows_the_powers_of_two() {
        let sys = system("1 + u1 + u2", 2, 2);
        let records = dilation_scan(&sys, &triangle(), &zeros(2, 3), 1, 8).unwrap();
        assert_eq!(records.len(), 8);
        for r in &records {
            let dyadic = r.n.is_power_of_two();
            assert_eq!(r.product, rat(1, 8), "n = {}", r.n);
            if dyadic {
                assert_eq!(r.joint, rat(1, 4), "n = {}", r.n);
                assert_eq!(r.defect, rat(1, 8), "n = {}", r.n);
                assert_eq!(r.witness_dim, 1, "n = {}", r.n);
            } else {
                assert_eq!(r.joint, rat(1, 8), "n = {}", r.n);
                assert_eq!(r.defect, rat(0, 1), "n = {}", r.n);
                assert_eq!(r.witness_dim, 0, "n = {}", r.n);
            }
        }
    }

    #[test]
    fn pair_shape_never_defects() {
        let sys = system("1 + u1 + u2", 2, 2);
        let shape = Shape::new(vec![v(&[0, 0]), v(&[1, 0])]).unwrap();
        let records = dilation_scan(&sys, &shape, &zeros(2, 2), 1, 8).unwrap();
        for r in &records {
            assert_eq!(r.defect, rat(0, 1));
            assert_eq!(r.witness_dim, 0);
        }
    }

    #[test]
    fn incompatible_pins_give_negative_defect() {
        let sys = system("1 + u1 + u2", 2, 2);
        let ones = vec![FpScalar::one(2).unwrap(); 3];
        let records = dilation_scan(&sys, &triangle(), &ones, 1, 1).unwrap();
        assert_eq!(records[0].joint, rat(0, 1));
        assert_eq!(records[0].defect, rat(-1, 8));
    }

    #[test]
    fn witness_comes_with_its_divisibility_proof() {
        let sys = system("1 + u1 + u2", 2, 2);
        let w = shape_witness(&sys, &triangle(), 2).unwrap().unwrap();
        assert_eq!(w.n, 2);
        assert!(w.coeffs.iter().all(|c| c.value() == 1));
        let member = shape_poly(triangle().points(), &w.coeffs, 2).unwrap();
        assert_eq!(poly_mul(sys.relation(), &w.quotient).unwrap(), member);
        assert!(shape_witness(&sys, &triangle(), 3).unwrap().is_none());
    }

    #[test]
    fn characteristic_three_defects_on_powers_of_three() {
        let sys = system("1 + u1 + u2", 3, 2);
        let records = witness_scan(&sys, &triangle(), 1, 10).unwrap();
        for r in &records {
            let expected = usize::from(matches!(r.n, 1 | 3 | 9));
            assert_eq!(r.witness_dim, expected, "n = {}", r.n);
        }
    }

    #[test]
    fn witness_and_defect_scans_agree() {
        let sys = system("1 + u1 + u2", 2, 2);
        let defects = dilation_scan(&sys, &triangle(), &zeros(2, 3), 1, 12).unwrap();
        let witnesses = witness_scan(&sys, &triangle(), 1, 12).unwrap();
        for (d, w) in defects.iter().zip(&witnesses) {
            assert_eq!(d.n, w.n);
            assert_eq!(d.witness_dim, w.witness_dim);
            assert_eq!(d.defect.is_zero(), w.witness_dim == 0);
        }
    }

    #[test]
    fn scan_ranges_are_validated() {
        let sys = system("1 + u1 + u2", 2, 2);
        assert!(matches!(
            dilation_scan(&sys, &triangle(), &zeros(2, 3), 0, 4),
            Err(Error::ZeroDilation)
        ));
        assert!(matches!(
            witness_scan(&sys, &triangle(), 5, 4),
            Err(Error::EmptyRange)
        ));
        assert!(matches!(
            dilation_scan(&sys, &triangle(), &zeros(2, 2), 1, 2),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
