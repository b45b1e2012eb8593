//! Independent oracles for the S-unit machinery.
//!
//! The production enumerator inverts the final coordinate through lattice
//! membership; the oracle here scans full exponent boxes for every
//! coordinate and intersects by brute force. Both must see exactly the same
//! solutions. Membership itself is checked by reconstruction: any product of
//! generator powers must come back from `membership` with an expression that
//! evaluates to the same value.

use std::collections::BTreeSet;

use mixlab_core::{
    degenerate_family_count, enumerate_solutions, Rational, SUnitEquation, SUnitGroup, SearchLimits,
};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// All values `± Π g^e` with exponents in the box, by direct scanning.
fn boxed_members(generators: &[Rational], allow_sign: bool, bound: i64) -> BTreeSet<Rational> {
    let mut values = BTreeSet::new();
    let mut exps = vec![-bound; generators.len()];
    loop {
        let mut value = Rational::one();
        for (g, &e) in generators.iter().zip(&exps) {
            let mut power = Rational::one();
            for _ in 0..e.unsigned_abs() {
                power *= g;
            }
            if e < 0 {
                power = power.recip();
            }
            value *= power;
        }
        if allow_sign {
            values.insert(-value.clone());
        }
        values.insert(value);
        let mut pos = exps.len();
        loop {
            if pos == 0 {
                return values;
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

/// Brute-force ordered pairs `(x, y)` with `x + y = 1`, both boxed members.
fn naive_two_term_solutions(
    generators: &[Rational],
    allow_sign: bool,
    bound: i64,
) -> Vec<(Rational, Rational)> {
    let members = boxed_members(generators, allow_sign, bound);
    let mut pairs = Vec::new();
    for x in &members {
        for y in &members {
            if x + y == Rational::one() {
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    pairs.sort();
    pairs
}

#[test]
fn enumerator_matches_the_naive_scan() {
    let generators = vec![q(2, 1), q(3, 1)];
    for allow_sign in [false, true] {
        for bound in 1..=3i64 {
            let group = SUnitGroup::new(generators.clone(), allow_sign).unwrap();
            let eq = SUnitEquation::new(group, vec![q(1, 1), q(1, 1)]).unwrap();
            let fast: Vec<(Rational, Rational)> =
                enumerate_solutions(&eq, bound, &SearchLimits::default())
                    .unwrap()
                    .into_iter()
                    .map(|s| (s.values[0].clone(), s.values[1].clone()))
                    .collect();
            let slow = naive_two_term_solutions(&generators, allow_sign, bound);
            assert_eq!(fast, slow, "allow_sign={allow_sign}, bound={bound}");
        }
    }
}

#[test]
fn signed_two_term_count_at_bound_two_is_fifteen() {
    let group = SUnitGroup::new(vec![q(2, 1), q(3, 1)], true).unwrap();
    let eq = SUnitEquation::new(group, vec![q(1, 1), q(1, 1)]).unwrap();
    let sols = enumerate_solutions(&eq, 2, &SearchLimits::default()).unwrap();
    assert_eq!(sols.len(), 15);
}

#[test]
fn family_count_agrees_with_filtered_enumeration() {
    let coeffs = vec![q(1, 1), q(1, 1), q(-1, 1)];
    for bound in 1..=2i64 {
        let group = SUnitGroup::new(vec![q(2, 1), q(3, 1)], true).unwrap();
        let eq = SUnitEquation::new(group, coeffs.clone()).unwrap();
        let counted =
            degenerate_family_count(&eq, &[2, 3], bound, &SearchLimits::default()).unwrap();
        let filtered = enumerate_solutions(&eq, bound, &SearchLimits::default())
            .unwrap()
            .into_iter()
            // a_2 x_2 + a_3 x_3 = x_2 − x_3 vanishes exactly when x_2 = x_3.
            .filter(|s| s.values[1] == s.values[2])
            .count() as u64;
        assert_eq!(counted, filtered, "bound={bound}");
    }
}

const GROUP_POOL: [(&[(i64, i64)], bool); 5] = [
    (&[(2, 1), (3, 1)], false),
    (&[(2, 1), (3, 1)], true),
    (&[(2, 1), (4, 1)], false),
    (&[(-2, 1), (2, 1)], false),
    (&[(2, 3), (-5, 2), (7, 1)], true),
];

proptest! {
    /// Products of generator powers always come back from membership, with
    /// an expression evaluating to the original value; and the box search
    /// succeeds whenever the original exponents fit the box.
    #[test]
    fn membership_reconstructs_products(
        case in (0..GROUP_POOL.len(), prop::collection::vec(-5i64..=5, 3), any::<bool>())
    ) {
        let (index, raw_exps, flip) = case;
        let (gens, allow_sign) = GROUP_POOL[index];
        let generators: Vec<Rational> = gens.iter().map(|&(n, d)| q(n, d)).collect();
        let group = SUnitGroup::new(generators.clone(), allow_sign).unwrap();

        // Independent value computation by repeated multiplication.
        let mut value = Rational::one();
        for (g, &e) in generators.iter().zip(&raw_exps) {
            let mut power = Rational::one();
            for _ in 0..e.unsigned_abs() {
                power *= g;
            }
            if e < 0 {
                power = power.recip();
            }
            value *= power;
        }
        if allow_sign && flip {
            value = -value;
        }

        let expr = group.membership(&value).unwrap().expect("a product of generators");
        prop_assert_eq!(group.evaluate(&expr).unwrap(), value);
    }

    /// Solutions reported by the enumerator actually solve the equation,
    /// carry in-box expressions, and are free of duplicates.
    #[test]
    fn enumerated_solutions_are_sound(
        case in (0..GROUP_POOL.len(), 1i64..=2)
    ) {
        let (index, bound) = case;
        let (gens, allow_sign) = GROUP_POOL[index];
        let generators: Vec<Rational> = gens.iter().map(|&(n, d)| q(n, d)).collect();
        let group = SUnitGroup::new(generators, allow_sign).unwrap();
        let eq = SUnitEquation::new(group, vec![q(1, 1), q(1, 1)]).unwrap();
        let sols = enumerate_solutions(&eq, bound, &SearchLimits::default()).unwrap();
        let mut seen = BTreeSet::new();
        for sol in &sols {
            prop_assert_eq!(&sol.values[0] + &sol.values[1], Rational::one());
            for (value, expr) in sol.values.iter().zip(&sol.expressions) {
                prop_assert_eq!(&eq.group().evaluate(expr).unwrap(), value);
                prop_assert!(expr.exponents.iter().all(|e| e.abs() <= bound));
            }
            prop_assert!(seen.insert(sol.values.clone()), "duplicate {:?}", sol.values);
        }
    }
}
