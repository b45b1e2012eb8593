//! Unit equations `a_1·x_1 + … + a_k·x_k = 1` with the unknowns ranging over
//! a finitely generated subgroup of `Q^×`.
//!
//! Solutions are searched inside an exponent box `[-H, H]^m`: each unknown
//! must be expressible with generator exponents of magnitude at most `H`.
//! This makes every question finite while still exhibiting the
//! characteristic-zero behaviour — as the box grows, the set of solutions
//! with no vanishing subsum stops changing, while each vanishing-subsum
//! pattern contributes a family whose size keeps growing with the box.
//!
//! The enumerator inverts the last coordinate through group membership
//! instead of scanning a full box for it, so a `k`-term equation costs one
//! box of size `(2H+1)^m` per free coordinate rather than per coordinate.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::algebra::{rational_pow, Rational};
use crate::error::{Error, Result};
use crate::sunit::group::{GroupExpression, SUnitGroup};

/// Degeneracy classification looks at every subset of the terms, so the term
/// count is capped to keep the subset lattice enumerable.
const MAX_CLASSIFIED_TERMS: usize = 20;

/// Caps on how much work a single enumeration call may attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Upper bound on candidate exponent assignments considered in any one
    /// enumeration phase.
    pub max_candidates: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_candidates: 1_000_000,
        }
    }
}

/// The equation `Σ_j coeffs[j] · x_j = 1` over a fixed group.
#[derive(Clone, Debug)]
pub struct SUnitEquation {
    group: SUnitGroup,
    coeffs: Vec<Rational>,
}

impl SUnitEquation {
    /// At least two terms, all coefficients nonzero.
    pub fn new(group: SUnitGroup, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::TooFewTerms);
        }
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(Self { group, coeffs })
    }

    pub fn group(&self) -> &SUnitGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }
}

/// One solution tuple: the values, their in-box expressions, and whether some
/// proper subsum vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct SUnitSolution {
    pub values: Vec<Rational>,
    pub expressions: Vec<GroupExpression>,
    pub degenerate: bool,
}

/// Which subsums of a solution vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub degenerate: bool,
    /// The inclusion-minimal vanishing subsets, as ascending 1-based term
    /// indices, ordered by size then lexicographically.
    pub minimal_vanishing: Vec<Vec<usize>>,
}

/// All solutions of the equation inside the exponent box, sorted by value
/// tuple. Complete for the box: a tuple is found if and only if every
/// component has an expression with exponents in `[-bound, bound]`.
pub fn enumerate_solutions(
    equation: &SUnitEquation,
    bound: i64,
    limits: &SearchLimits,
) -> Result<Vec<SUnitSolution>> {
    let tuples = enumerate_affine(
        equation.group(),
        equation.coeffs(),
        &Rational::one(),
        bound,
        limits,
    )?;
    tuples
        .into_iter()
        .map(|values| {
            let expressions = values
                .iter()
                .map(|v| {
                    equation
                        .group()
                        .represent_in_box(v, bound)
                        .map(|found| found.expect("enumerated values lie in the box"))
                })
                .collect::<Result<Vec<GroupExpression>>>()?;
            let degenerate = classify_degeneracy(equation, &values)?.degenerate;
            Ok(SUnitSolution {
                values,
                expressions,
                degenerate,
            })
        })
        .collect()
}

/// Finds every vanishing proper subsum of a solution and keeps the minimal
/// ones. The values must actually solve the equation.
pub fn classify_degeneracy(equation: &SUnitEquation, values: &[Rational]) -> Result<Degeneracy> {
    let k = equation.terms();
    if values.len() != k {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: k,
        });
    }
    if k > MAX_CLASSIFIED_TERMS {
        return Err(Error::TooManyTerms(k));
    }
    let terms: Vec<Rational> = equation
        .coeffs()
        .iter()
        .zip(values)
        .map(|(a, x)| a * x)
        .collect();
    if terms.iter().fold(Rational::zero(), |acc, t| acc + t) != Rational::one() {
        return Err(Error::EquationNotSatisfied);
    }

    // Subset sums through two half-tables: sum(mask) is one addition.
    let low_len = k / 2;
    let low_sums = subset_sums(&terms[..low_len]);
    let high_sums = subset_sums(&terms[low_len..]);
    let low_mask = (1usize << low_len) - 1;

    let full = (1usize << k) - 1;
    let mut minimal_masks: Vec<usize> = Vec::new();
    for mask in 1..full {
        let sum = &low_sums[mask & low_mask] + &high_sums[mask >> low_len];
        if !sum.is_zero() {
            continue;
        }
        // Any proper subset of `mask` is numerically smaller, so the minimal
        // vanishing subsets of everything below are already on the list.
        if minimal_masks.iter().any(|&m| m | mask == mask) {
            continue;
        }
        minimal_masks.push(mask);
    }

    let mut minimal_vanishing: Vec<Vec<usize>> = minimal_masks
        .into_iter()
        .map(|mask| {
            (0..k)
                .filter(|j| mask & (1 << j) != 0)
                .map(|j| j + 1)
                .collect()
        })
        .collect();
    minimal_vanishing.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(Degeneracy {
        degenerate: !minimal_vanishing.is_empty(),
        minimal_vanishing,
    })
}

/// The number of solutions in the box whose vanishing pattern is exactly the
/// split `subset` / complement: the subset terms sum to zero and the rest
/// sum to one, independently. The product of the two counts measures how the
/// family fills out the box.
pub fn degenerate_family_count(
    equation: &SUnitEquation,
    subset: &[usize],
    bound: i64,
    limits: &SearchLimits,
) -> Result<u64> {
    let k = equation.terms();
    let mut selected = vec![false; k];
    if subset.is_empty() || subset.len() >= k {
        return Err(Error::InvalidSubset);
    }
    for &index in subset {
        if index == 0 || index > k || selected[index - 1] {
            return Err(Error::InvalidSubset);
        }
        selected[index - 1] = true;
    }
    let pick = |wanted: bool| -> Vec<Rational> {
        equation
            .coeffs()
            .iter()
            .zip(&selected)
            .filter(|(_, &s)| s == wanted)
            .map(|(a, _)| a.clone())
            .collect()
    };
    let vanishing_count = enumerate_affine(
        equation.group(),
        &pick(true),
        &Rational::zero(),
        bound,
        limits,
    )?
    .len();
    let residual_count = enumerate_affine(
        equation.group(),
        &pick(false),
        &Rational::one(),
        bound,
        limits,
    )?
    .len();
    (vanishing_count as u64)
        .checked_mul(residual_count as u64)
        .ok_or(Error::IntegerOverflow)
}

/// Sums over all subsets of `terms`, indexed by bitmask.
fn subset_sums(terms: &[Rational]) -> Vec<Rational> {
    let mut sums = Vec::with_capacity(1 << terms.len());
    sums.push(Rational::zero());
    for mask in 1..(1usize << terms.len()) {
        let low = mask.trailing_zeros() as usize;
        let rest = &sums[mask & (mask - 1)];
        sums.push(rest + &terms[low]);
    }
    sums
}

/// Solutions of `Σ_j coeffs[j] · x_j = target` with every `x_j` a group
/// member expressible in the exponent box. Returns the sorted value tuples.
///
/// The first `k-1` coordinates range over the in-box member values; the last
/// is solved for and checked by membership, so the work is one box
/// enumeration plus `V^(k-1)` candidate completions.
fn enumerate_affine(
    group: &SUnitGroup,
    coeffs: &[Rational],
    target: &Rational,
    bound: i64,
    limits: &SearchLimits,
) -> Result<Vec<Vec<Rational>>> {
    if bound < 0 {
        return Err(Error::EmptyRange);
    }
    let k = coeffs.len();
    debug_assert!(k >= 1);
    if k == 1 {
        let x = target / &coeffs[0];
        return Ok(match group.represent_in_box(&x, bound)? {
            Some(_) => vec![vec![x]],
            None => Vec::new(),
        });
    }

    let values = member_values(group, bound, limits)?;
    check_budget(pow_u128(values.len() as u128, k - 1), limits)?;

    let mut tuples: Vec<Vec<Rational>> = Vec::new();
    let mut indices = vec![0usize; k - 1];
    if values.is_empty() {
        return Ok(tuples);
    }
    loop {
        let mut partial = Rational::zero();
        for (j, &i) in indices.iter().enumerate() {
            partial += &coeffs[j] * &values[i];
        }
        let last = (target - partial) / &coeffs[k - 1];
        if !last.is_zero() && group.represent_in_box(&last, bound)?.is_some() {
            let mut tuple: Vec<Rational> = indices.iter().map(|&i| values[i].clone()).collect();
            tuple.push(last);
            tuples.push(tuple);
        }
        // Odometer over the index vector, last position fastest.
        let mut pos = k - 1;
        loop {
            if pos == 0 {
                tuples.sort();
                return Ok(tuples);
            }
            pos -= 1;
            if indices[pos] + 1 < values.len() {
                indices[pos] += 1;
                for slot in &mut indices[pos + 1..] {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// The distinct values of in-box expressions, ascending.
fn member_values(group: &SUnitGroup, bound: i64, limits: &SearchLimits) -> Result<Vec<Rational>> {
    let m = group.generators().len();
    let width = 2 * (bound as u128) + 1;
    let sign_options: u128 = if group.allow_sign() { 2 } else { 1 };
    check_budget(sign_options.saturating_mul(pow_u128(width, m)), limits)?;

    let mut values: BTreeSet<Rational> = BTreeSet::new();
    let mut exps = vec![-bound; m];
    loop {
        let mut v = Rational::one();
        for (g, &e) in group.generators().iter().zip(&exps) {
            if e != 0 {
                v *= rational_pow(g, e);
            }
        }
        if group.allow_sign() {
            values.insert(-v.clone());
        }
        values.insert(v);
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(values.into_iter().collect());
            }
            pos -= 1;
            if exps[pos] < bound {
                exps[pos] += 1;
                for slot in &mut exps[pos + 1..] {
                    *slot = -bound;
                }
                break;
            }
        }
    }
}

fn pow_u128(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

fn check_budget(needed: u128, limits: &SearchLimits) -> Result<()> {
    if needed > u128::from(limits.max_candidates) {
        return Err(Error::WorkBoundExceeded {
            needed: needed.min(u128::from(u64::MAX)) as u64,
            bound: limits.max_candidates,
        });
    }
    Ok(())
}
