//! S-unit equations in two worlds.
//!
//! Over `Q`, a unit equation against a finitely generated group has finitely
//! many non-degenerate solutions: [`enumerate_solutions`] finds everything
//! inside an exponent box, and growing the box eventually adds nothing new
//! except along degenerate families, whose growth [`degenerate_family_count`]
//! measures directly.
//!
//! Over `F_p(t)` the same equation behaves differently: the Frobenius map
//! `x ↦ x^p` fixes the target `1` and respects sums, so [`frobenius_orbit`]
//! turns a single solution into an infinite chain of them. The contrast
//! between the two halves of this module is the arithmetic shadow of the
//! mixing dichotomy in the rest of the crate.

mod equation;
mod fppoly;
mod group;
mod ratfunc;

pub use equation::{
    classify_degeneracy, degenerate_family_count, enumerate_solutions, Degeneracy, SUnitEquation,
    SUnitSolution, SearchLimits,
};
pub use fppoly::FpPoly;
pub use group::{GroupExpression, SUnitGroup};
pub use ratfunc::{frobenius_orbit, RatFunc};
