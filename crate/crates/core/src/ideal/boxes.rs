//! Axis-aligned lattice boxes and box erosion.

use crate::algebra::ExpVec;
use crate::error::{Error, Result};

/// A product of integer intervals `[lo_i, hi_i]` in `Z^d`, both ends
/// inclusive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntBox {
    lo: ExpVec,
    hi: ExpVec,
}

impl IntBox {
    /// Builds a box; `lo ≤ hi` must hold in every coordinate.
    pub fn new(lo: ExpVec, hi: ExpVec) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch(lo.dim(), hi.dim()));
        }
        if lo.coords().iter().zip(hi.coords()).any(|(&a, &b)| a > b) {
            return Err(Error::InvalidBox);
        }
        Ok(Self { lo, hi })
    }

    /// Smallest box containing all `points` (which must be nonempty and share
    /// a dimension).
    pub fn hull(points: &[ExpVec]) -> Result<Self> {
        let first = points.first().ok_or(Error::TooFewPoints(1))?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in &points[1..] {
            if p.dim() != first.dim() {
                return Err(Error::DimensionMismatch(first.dim(), p.dim()));
            }
            for (i, &c) in p.coords().iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        Ok(Self {
            lo: ExpVec::new(lo)?,
            hi: ExpVec::new(hi)?,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &ExpVec {
        &self.lo
    }

    pub fn hi(&self) -> &ExpVec {
        &self.hi
    }

    pub fn contains(&self, p: &ExpVec) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lo.coords().iter().zip(self.hi.coords()))
                .all(|(&c, (&l, &h))| l <= c && c <= h)
    }

    /// Number of lattice points.
    pub fn cell_count(&self) -> u128 {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(&l, &h)| (h as i64 - l as i64 + 1) as u128)
            .product()
    }

    /// The box enlarged by `margin` in every direction.
    pub fn grown(&self, margin: i32) -> Result<Self> {
        let lo = ExpVec::new(self.lo.coords().iter().map(|&c| c - margin).collect())?;
        let hi = ExpVec::new(self.hi.coords().iter().map(|&c| c + margin).collect())?;
        IntBox::new(lo, hi)
    }

    /// All lattice points in lexicographic (row-major) order.
    pub fn points(&self) -> impl Iterator<Item = ExpVec> + '_ {
        let dim = self.dim();
        let mut cur: Option<Vec<i32>> = Some(self.lo.coords().to_vec());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            // Odometer step: increment the last coordinate, carrying left.
            let c = cur.as_mut().unwrap();
            let mut i = dim;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if c[i] < self.hi.coords()[i] {
                    c[i] += 1;
                    break;
                }
                c[i] = self.lo.coords()[i];
            }
            Some(ExpVec::new(out).expect("box coordinates are bounded"))
        })
    }
}

impl std::fmt::Display for IntBox {
    /// `lo:hi`, e.g. `(0,0):(2,2)`; matches the CLI window grammar.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// All translation vectors `v` with `v + f_box ⊆ target`, in lexicographic
/// order.
///
/// Componentwise this is the interval `[target.lo − f_box.lo,
/// target.hi − f_box.hi]`; the result is empty as soon as one coordinate's
/// interval is empty. For supports of polynomials this over-approximates the
/// exact Newton-polytope erosion but never misses a feasible quotient
/// support, which is the property membership search needs.
pub fn erosion_support(target: &IntBox, f_box: &IntBox) -> Result<Vec<ExpVec>> {
    if target.dim() != f_box.dim() {
        return Err(Error::DimensionMismatch(target.dim(), f_box.dim()));
    }
    let mut lo = Vec::with_capacity(target.dim());
    let mut hi = Vec::with_capacity(target.dim());
    for i in 0..target.dim() {
        let l = target.lo.coords()[i] - f_box.lo.coords()[i];
        let h = target.hi.coords()[i] - f_box.hi.coords()[i];
        if l > h {
            return Ok(Vec::new());
        }
        lo.push(l);
        hi.push(h);
    }
    let eroded = IntBox::new(ExpVec::new(lo)?, ExpVec::new(hi)?)?;
    Ok(eroded.points().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[i32]) -> ExpVec {
        ExpVec::new(coords.to_vec()).unwrap()
    }

    fn boxed(lo: &[i32], hi: &[i32]) -> IntBox {
        IntBox::new(v(lo), v(hi)).unwrap()
    }

    #[test]
    fn construction_validates_corners() {
        assert!(IntBox::new(v(&[0, 0]), v(&[1, -1])).is_err());
        assert!(IntBox::new(v(&[0]), v(&[1, 1])).is_err());
        assert!(IntBox::new(v(&[2, 2]), v(&[2, 2])).is_ok());
    }

    #[test]
    fn hull_of_points() {
        let h = IntBox::hull(&[v(&[0, 3]), v(&[-1, 0]), v(&[2, 2])]).unwrap();
        assert_eq!(h, boxed(&[-1, 0], &[2, 3]));
        assert!(IntBox::hull(&[]).is_err());
    }

    #[test]
    fn point_iteration_is_lexicographic() {
        let b = boxed(&[0, -1], &[1, 0]);
        let pts: Vec<_> = b.points().collect();
        assert_eq!(pts, vec![v(&[0, -1]), v(&[0, 0]), v(&[1, -1]), v(&[1, 0])]);
        assert_eq!(b.cell_count(), 4);
    }

    #[test]
    fn erosion_of_a_square_by_the_unit_square() {
        let target = boxed(&[0, 0], &[2, 2]);
        let fb = boxed(&[0, 0], &[1, 1]);
        let pts = erosion_support(&target, &fb).unwrap();
        assert_eq!(pts, vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn erosion_can_be_empty() {
        let target = boxed(&[0, 0], &[0, 0]);
        let fb = boxed(&[0, 0], &[1, 1]);
        assert!(erosion_support(&target, &fb).unwrap().is_empty());
    }

    #[test]
    fn erosion_with_mixed_corners() {
        // v + [0,1]×[0,1] ⊆ [-1,1]×[0,3] forces v1 ∈ {-1,0}, v2 ∈ {0,1,2}.
        let target = boxed(&[-1, 0], &[1, 3]);
        let fb = boxed(&[0, 0], &[1, 1]);
        let pts = erosion_support(&target, &fb).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts.first().unwrap(), &v(&[-1, 0]));
        assert_eq!(pts.last().unwrap(), &v(&[0, 2]));
        for p in &pts {
            let shifted_hi = p.checked_add(&v(&[1, 1])).unwrap();
            assert!(target.contains(p) && target.contains(&shifted_hi));
        }
    }

    #[test]
    fn display_round_trips_the_window_grammar() {
        assert_eq!(boxed(&[-1, 0], &[1, 3]).to_string(), "(-1,0):(1,3)");
    }
}
