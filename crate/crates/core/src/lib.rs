//! Exact computational engines for algebraic shift systems and S-unit equations.
//!
//! The crate has two halves that meet in a single dichotomy:
//!
//! * **Characteristic p** — a group shift over `F_p` indexed by `Z^d` is cut out
//!   by a Laurent polynomial `f`. [`haar`] computes exact Haar measures of
//!   cylinder sets through the duality between cylinders and the ideal `⟨f⟩`,
//!   and [`mixing`] scans dilates of a finite shape for higher-order mixing
//!   defects. The Frobenius map `h ↦ h^(p^n)` manufactures divisibility
//!   witnesses along dilates, so the defects recur forever.
//! * **Characteristic 0** — [`sunit`] enumerates solutions of
//!   `Σ a_j x_j = 1` with every `x_j` in a finitely generated multiplicative
//!   subgroup of `Q*`. Inside any exponent box the non-degenerate solution set
//!   stabilizes; only degenerate families keep growing. Over `F_p(t)` the same
//!   equation has infinite Frobenius orbits, which [`sunit::frobenius_orbit`]
//!   materializes.
//!
//! Everything is exact: coefficients live in `F_p` for machine-word primes,
//! measures and heights are arbitrary-precision rationals, and every engine is
//! deterministic (canonical term order, fixed pivot rule, ordered reports).
//!
//! Layered design: [`algebra`] (scalars, exponent vectors, Laurent
//! polynomials) → [`ideal`] (exact `F_p` linear algebra, box erosion,
//! divisibility and kernel computation) → [`haar`] (cylinder measures and the
//! window oracle) → [`mixing`] (defect and witness scans); [`sunit`] stands on
//! [`algebra`] alone.

pub mod algebra;
pub mod error;
pub mod haar;
pub mod ideal;
pub mod mixing;
pub mod sunit;

pub use algebra::{parse_poly, ExpVec, FpScalar, LaurentPoly, Rational};
pub use error::{Error, Result};
pub use haar::{
    cylinder_measure, joint_measure, merge_cylinders, translate_cylinder, window_oracle,
    CylinderSpec, MeasureLog, MeasureResult, SystemSpec, WindowOracleReport,
};
pub use ideal::{
    divides, erosion_support, kernel_on_support, row_reduce, FpMatrix, IntBox, KernelBasis,
    MembershipWitness,
};
pub use mixing::{
    dilation_scan, shape_witness, witness_scan, DefectRecord, Shape, ShapeWitness, WitnessRecord,
};
pub use sunit::{
    classify_degeneracy, degenerate_family_count, enumerate_solutions, frobenius_orbit, Degeneracy,
    FpPoly, GroupExpression, RatFunc, SUnitEquation, SUnitGroup, SUnitSolution, SearchLimits,
};
