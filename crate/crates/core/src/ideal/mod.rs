//! Exact linear algebra over `F_p` and the divisibility machinery built on it.
//!
//! The central question everything here answers: *is a given Laurent
//! polynomial a multiple of `f`?* — and, dually, *which combinations of
//! values on a finite site set are forced to correlate?* Both reduce to
//! finite linear systems because a quotient's support is confined to the
//! erosion of the target's bounding box by `f`'s bounding box (Newton-polytope
//! additivity gives the per-coordinate interval exactly).
//!
//! * [`FpMatrix`] / [`row_reduce`] — dense reduced row echelon form with a
//!   fixed pivot rule (leftmost column, lowest row index), so every basis this
//!   module emits is canonical. `p = 2` transparently uses a bit-packed row
//!   representation; the contract and results are identical.
//! * [`erosion_support`] — the candidate quotient support.
//! * [`divides`] — membership in the principal ideal `⟨f⟩` with an explicit
//!   quotient witness.
//! * [`kernel_on_support`] — the space of coefficient rows `b` on a site set
//!   `S` with `Σ_s b_s u^s ∈ ⟨f⟩`; this is the annihilator that determines
//!   every cylinder measure upstairs.

mod boxes;
mod matrix;
mod membership;

pub use boxes::{erosion_support, IntBox};
pub use matrix::{row_reduce, FpMatrix};
pub use membership::{divides, kernel_on_support, KernelBasis, MembershipWitness};

pub(crate) use matrix::Reduction;
