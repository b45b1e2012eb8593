//! Exact Haar measures of cylinder events in algebraic shift systems.
//!
//! A system is the group of configurations `x : Z^d → F_p` annihilated by
//! every translate of one relation polynomial `f`. Its Haar measure projects
//! to the uniform measure on the (finite) image of any finite site set, and
//! that image is cut out exactly by the kernel computed in [`crate::ideal`]:
//! a cylinder fixing values `a_s` on sites `S` has measure
//! `p^(dim K(S) − |S|)` when every kernel row annihilates `a`, and measure
//! zero otherwise. Everything here is exact rational arithmetic — there is
//! no sampling anywhere.
//!
//! [`window_oracle`] is the deliberately naive counterweight: it enumerates
//! every configuration of a finite window, keeps the ones satisfying all
//! relation translates that fit inside, and reports the empirical frequency
//! of the cylinder among them. It shares no code path with
//! [`cylinder_measure`] beyond scalar arithmetic, which is what makes the
//! agreement of the two a meaningful check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{add_mod, mul_mod, p_neg_power, ExpVec, FpScalar, LaurentPoly, Rational};
use crate::error::{Error, Result};
use crate::ideal::{erosion_support, kernel_on_support, IntBox, Reduction};

/// Enumeration guard for [`window_oracle`]: at most `2^24` configurations.
const ENUMERATION_LOG2_BOUND: u32 = 24;

/// An algebraic shift system: all configurations `x : Z^d → F_p` satisfying
/// `Σ_s f_s · x_(t+s) = 0` for every translate `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SystemSpec {
    relation: LaurentPoly,
}

impl SystemSpec {
    /// A system needs a nonzero relation; the zero polynomial would impose
    /// no constraint at all and carry no support box.
    pub fn new(relation: LaurentPoly) -> Result<Self> {
        if relation.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { relation })
    }

    pub fn relation(&self) -> &LaurentPoly {
        &self.relation
    }

    pub fn modulus(&self) -> u16 {
        self.relation.modulus()
    }

    pub fn dim(&self) -> usize {
        self.relation.dim()
    }
}

/// A cylinder event: finitely many sites pinned to fixed values.
///
/// Sites are kept in sorted order and the empty cylinder (the whole space)
/// is allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CylinderSpec {
    modulus: u16,
    dim: usize,
    values: BTreeMap<ExpVec, u16>,
}

impl CylinderSpec {
    /// Builds a cylinder from `(site, value)` pairs; values are reduced mod
    /// `p`. Repeating a site with the same value is tolerated, two different
    /// values for one site are rejected.
    pub fn new(
        modulus: u64,
        dim: usize,
        assignments: impl IntoIterator<Item = (ExpVec, i64)>,
    ) -> Result<Self> {
        let p = crate::algebra::validate_modulus(modulus)?;
        let mut values = BTreeMap::new();
        for (site, raw) in assignments {
            if site.dim() != dim {
                return Err(Error::DimensionMismatch(dim, site.dim()));
            }
            let value = raw.rem_euclid(p as i64) as u16;
            if let Some(&old) = values.get(&site) {
                if old != value {
                    return Err(Error::ConflictingAssignment(site.to_string()));
                }
            }
            values.insert(site, value);
        }
        Ok(Self {
            modulus: p,
            dim,
            values,
        })
    }

    /// The unconstrained cylinder — the whole space.
    pub fn empty(modulus: u64, dim: usize) -> Result<Self> {
        Self::new(modulus, dim, std::iter::empty())
    }

    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sites in sorted order.
    pub fn sites(&self) -> Vec<ExpVec> {
        self.values.keys().cloned().collect()
    }

    /// `(site, value)` pairs in sorted site order.
    pub fn assignments(&self) -> impl Iterator<Item = (&ExpVec, FpScalar)> + '_ {
        self.values
            .iter()
            .map(|(s, &v)| (s, FpScalar::from_raw(v, self.modulus)))
    }

    pub fn value_at(&self, site: &ExpVec) -> Option<FpScalar> {
        self.values
            .get(site)
            .map(|&v| FpScalar::from_raw(v, self.modulus))
    }
}

/// An exact measure value together with its logarithmic form.
///
/// Every cylinder measure is either zero or a power `p^(−k)`; keeping `k`
/// alongside the rational saves consumers from re-factoring denominators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeasureResult {
    value: Rational,
    log_form: MeasureLog,
}

/// Which of the two possible shapes a measure value has.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MeasureLog {
    /// The event is empty in the system.
    Zero,
    /// The measure is `p^(−k)` with this `k`.
    PowNeg(u32),
}

impl MeasureResult {
    pub(crate) fn zero() -> Self {
        Self {
            value: Rational::zero(),
            log_form: MeasureLog::Zero,
        }
    }

    pub(crate) fn pow_neg(modulus: u16, k: u32) -> Self {
        Self {
            value: p_neg_power(modulus, k),
            log_form: MeasureLog::PowNeg(k),
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn log_form(&self) -> MeasureLog {
        self.log_form
    }

    pub fn is_zero(&self) -> bool {
        self.log_form == MeasureLog::Zero
    }
}

fn check_system_cylinder(system: &SystemSpec, cylinder: &CylinderSpec) -> Result<()> {
    if system.modulus() != cylinder.modulus() {
        return Err(Error::ModulusMismatch(system.modulus(), cylinder.modulus()));
    }
    if system.dim() != cylinder.dim() {
        return Err(Error::DimensionMismatch(system.dim(), cylinder.dim()));
    }
    Ok(())
}

/// The shifted cylinder `σ^v A`: with `(σ^v x)_s = x_(s−v)`, pinning `x_(s)`
/// beforehand pins `x_(s+v)` afterwards, so every site moves by `+v`.
pub fn translate_cylinder(cylinder: &CylinderSpec, shift: &ExpVec) -> Result<CylinderSpec> {
    if shift.dim() != cylinder.dim() {
        return Err(Error::DimensionMismatch(cylinder.dim(), shift.dim()));
    }
    let mut values = BTreeMap::new();
    for (site, value) in &cylinder.values {
        values.insert(site.checked_add(shift)?, *value);
    }
    Ok(CylinderSpec {
        modulus: cylinder.modulus,
        dim: cylinder.dim,
        values,
    })
}

/// The intersection of two cylinders, or `None` when they pin some site to
/// two different values (an empty event, not an error).
pub fn merge_cylinders(a: &CylinderSpec, b: &CylinderSpec) -> Result<Option<CylinderSpec>> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch(a.modulus, b.modulus));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let mut values = a.values.clone();
    for (site, &value) in &b.values {
        match values.insert(site.clone(), value) {
            Some(old) if old != value => return Ok(None),
            _ => {}
        }
    }
    Ok(Some(CylinderSpec {
        modulus: a.modulus,
        dim: a.dim,
        values,
    }))
}

/// The exact Haar measure of a cylinder.
///
/// The projection of the system onto the sites is the annihilator of the
/// site kernel, so the cylinder has measure `p^(dim K − |S|)` when every
/// kernel row pairs to zero with the pinned values and measure `0`
/// otherwise. The empty cylinder has measure `1`.
pub fn cylinder_measure(system: &SystemSpec, cylinder: &CylinderSpec) -> Result<MeasureResult> {
    check_system_cylinder(system, cylinder)?;
    let p = system.modulus();
    if cylinder.is_empty() {
        return Ok(MeasureResult::pow_neg(p, 0));
    }
    let sites = cylinder.sites();
    let kernel = kernel_on_support(system.relation(), &sites)?;
    let values: Vec<u16> = cylinder.values.values().copied().collect();
    for row in kernel.rows() {
        let mut acc = 0u16;
        for (coeff, &value) in row.iter().zip(&values) {
            acc = add_mod(acc, mul_mod(coeff.value(), value, p), p);
        }
        if acc != 0 {
            return Ok(MeasureResult::zero());
        }
    }
    let k = (sites.len() - kernel.dimension()) as u32;
    Ok(MeasureResult::pow_neg(p, k))
}

/// The measure of the intersection of several cylinders.
///
/// An empty list is the whole space (measure `1`); a pin conflict makes the
/// intersection empty (measure `0`).
pub fn joint_measure(system: &SystemSpec, cylinders: &[CylinderSpec]) -> Result<MeasureResult> {
    let Some((first, rest)) = cylinders.split_first() else {
        return Ok(MeasureResult::pow_neg(system.modulus(), 0));
    };
    let mut merged = first.clone();
    for cylinder in rest {
        match merge_cylinders(&merged, cylinder)? {
            Some(next) => merged = next,
            None => return Ok(MeasureResult::zero()),
        }
    }
    cylinder_measure(system, &merged)
}

/// What the brute-force window enumeration saw.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WindowOracleReport {
    /// The enumerated window.
    pub window: IntBox,
    /// Number of distinct restrictions of window solutions to the sites.
    pub image_size: u64,
    /// Whether some window solution restricts to exactly the pinned values.
    pub matching: bool,
    /// `1 / image_size` when matching, else `0` — exact for this window.
    pub measure_estimate: Rational,
    /// Whether the restricted solution space is unchanged when the window
    /// grows by one and by two cells in every direction.
    pub stabilized: bool,
}

/// Brute-force check of a cylinder frequency over a finite window.
///
/// Enumerates all `p^cells` window configurations, keeps those satisfying
/// every relation translate that fits inside the window, and restricts them
/// to the cylinder sites. The solutions form a subspace and restrict
/// uniformly onto their image, so `matching / image_size` is exactly the
/// conditional frequency of the pinned values in this window. The report's
/// `stabilized` flag compares the restricted solution space against the two
/// next window enlargements (computed by null-space algebra, not
/// enumeration) — once it no longer shrinks, the estimate agrees with the
/// infinite-volume measure.
///
/// Enumeration refuses to run past `2^24` configurations.
pub fn window_oracle(
    system: &SystemSpec,
    cylinder: &CylinderSpec,
    window: &IntBox,
) -> Result<WindowOracleReport> {
    check_system_cylinder(system, cylinder)?;
    if window.dim() != system.dim() {
        return Err(Error::DimensionMismatch(system.dim(), window.dim()));
    }
    let sites = cylinder.sites();
    if sites.iter().any(|s| !window.contains(s)) {
        return Err(Error::SitesOutsideWindow);
    }
    let p = system.modulus();
    let cell_total = window.cell_count();
    if cell_total > u128::from(ENUMERATION_LOG2_BOUND) {
        return Err(Error::WindowTooLarge {
            cells: cell_total.min(u128::from(u64::MAX)) as u64,
            bound_log2: ENUMERATION_LOG2_BOUND,
        });
    }
    let cells: Vec<ExpVec> = window.points().collect();
    let mut configs = 1u64;
    for _ in 0..cells.len() {
        // p ≤ 2^16 and the running product is capped, so this cannot wrap.
        configs = configs.saturating_mul(p as u64);
        if configs > 1u64 << ENUMERATION_LOG2_BOUND {
            return Err(Error::WindowTooLarge {
                cells: cells.len() as u64,
                bound_log2: ENUMERATION_LOG2_BOUND,
            });
        }
    }
    let index: BTreeMap<&ExpVec, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let relations = sparse_relations(system, window, &index)?;

    let site_cols: Vec<usize> = sites.iter().map(|s| index[s]).collect();
    let code_space = (p as u64).pow(site_cols.len() as u32);
    let mut target_code = 0u64;
    for (j, (_, value)) in cylinder.assignments().enumerate() {
        target_code += u64::from(value.value()) * (p as u64).pow(j as u32);
    }

    // Depth-first sweep over all window configurations, checking each
    // relation translate the moment its last cell gets a value. Branches
    // violating a relation are cut immediately, so the walk touches exactly
    // the locally consistent prefixes; the leaves are all solutions.
    let mut closing_at: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
    for (ri, relation) in relations.iter().enumerate() {
        let last = relation
            .iter()
            .map(|&(cell, _)| cell)
            .max()
            .expect("relations are nonempty");
        closing_at[last].push(ri);
    }
    let site_weight: Vec<u64> = (0..site_cols.len())
        .map(|j| (p as u64).pow(j as u32))
        .collect();

    let mut seen = vec![false; code_space as usize];
    let mut image_size = 0u64;
    let mut digits = vec![0u16; cells.len()];
    let mut next_value = vec![0u16; cells.len()];
    let mut depth = 0usize;
    loop {
        if next_value[depth] == p {
            next_value[depth] = 0;
            match depth.checked_sub(1) {
                Some(up) => {
                    depth = up;
                    continue;
                }
                None => break,
            }
        }
        digits[depth] = next_value[depth];
        next_value[depth] += 1;
        let consistent = closing_at[depth].iter().all(|&ri| {
            let mut acc = 0u16;
            for &(cell, coeff) in &relations[ri] {
                acc = add_mod(acc, mul_mod(coeff, digits[cell], p), p);
            }
            acc == 0
        });
        if !consistent {
            continue;
        }
        if depth + 1 == cells.len() {
            let mut code = 0u64;
            for (&cell, &weight) in site_cols.iter().zip(&site_weight) {
                code += u64::from(digits[cell]) * weight;
            }
            if !seen[code as usize] {
                seen[code as usize] = true;
                image_size += 1;
            }
        } else {
            depth += 1;
        }
    }

    let matching = seen[target_code as usize];
    let measure_estimate = if matching {
        Rational::new(BigInt::one(), BigInt::from(image_size))
    } else {
        Rational::zero()
    };
    let base = restricted_solution_basis(system, &sites, window)?;
    debug_assert_eq!(image_size, (p as u64).pow(base.len() as u32));
    let one_wider = restricted_solution_basis(system, &sites, &window.grown(1)?)?;
    let stabilized = base == one_wider && {
        let two_wider = restricted_solution_basis(system, &sites, &window.grown(2)?)?;
        base == two_wider
    };

    Ok(WindowOracleReport {
        window: window.clone(),
        image_size,
        matching,
        measure_estimate,
        stabilized,
    })
}

/// Relation translates fitting inside the window, as sparse rows over the
/// window cells.
fn sparse_relations(
    system: &SystemSpec,
    window: &IntBox,
    index: &BTreeMap<&ExpVec, usize>,
) -> Result<Vec<Vec<(usize, u16)>>> {
    let (f_lo, f_hi) = system
        .relation()
        .support_bounds()
        .expect("relation is nonzero");
    let f_box = IntBox::new(f_lo, f_hi)?;
    let mut relations = Vec::new();
    for t in erosion_support(window, &f_box)? {
        let mut row = Vec::with_capacity(system.relation().num_terms());
        for (fe, fc) in system.relation().terms() {
            let cell = t.checked_add(fe)?;
            row.push((index[&cell], fc.value()));
        }
        relations.push(row);
    }
    Ok(relations)
}

/// Canonical (echelon) basis of the window solution space restricted to the
/// sites, computed by exact linear algebra. Used for the stabilization
/// probes, where enlarged windows would be far beyond enumeration range.
fn restricted_solution_basis(
    system: &SystemSpec,
    sites: &[ExpVec],
    window: &IntBox,
) -> Result<Vec<Vec<u16>>> {
    let p = system.modulus();
    let cells: Vec<ExpVec> = window.points().collect();
    let index: BTreeMap<&ExpVec, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows: Vec<Vec<u16>> = sparse_relations(system, window, &index)?
        .into_iter()
        .map(|sparse| {
            let mut row = vec![0u16; cells.len()];
            for (cell, coeff) in sparse {
                row[cell] = coeff;
            }
            row
        })
        .collect();
    let solutions = Reduction::compute(p, cells.len(), rows).kernel_basis();
    let restricted: Vec<Vec<u16>> = solutions
        .iter()
        .map(|v| sites.iter().map(|s| v[index[s]]).collect())
        .collect();
    Ok(Reduction::compute(p, sites.len(), restricted)
        .rows()
        .to_vec())
}
