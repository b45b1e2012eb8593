//! Measure-theoretic invariants of the cylinder engine.
//!
//! These hold for every system and site set, not just the hand-checked
//! examples: cylinder measures over a fixed site set sum to one, pinning one
//! more site splits a measure into the sum over its values, and translation
//! never changes a measure.

use mixlab_core::{
    cylinder_measure, joint_measure, merge_cylinders, parse_poly, translate_cylinder, CylinderSpec,
    ExpVec, Rational, SystemSpec,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn v(a: i32, b: i32) -> ExpVec {
    ExpVec::new(vec![a, b]).unwrap()
}

const SYSTEMS: [(u64, &str); 4] = [
    (2, "1 + u1 + u2"),
    (2, "1 + u1 + u2 + u1*u2"),
    (3, "1 + u1 + u2"),
    (3, "1 + 2*u1 + u2 + u1*u2"),
];

fn system(index: usize) -> SystemSpec {
    let (p, text) = SYSTEMS[index];
    SystemSpec::new(parse_poly(text, p, 2).unwrap()).unwrap()
}

fn arb_case(max_sites: usize) -> impl Strategy<Value = (SystemSpec, Vec<ExpVec>)> {
    (
        0..SYSTEMS.len(),
        prop::collection::btree_set((-2i32..=2, -2i32..=2), 1..=max_sites),
    )
        .prop_map(|(index, points)| {
            (
                system(index),
                points.into_iter().map(|(a, b)| v(a, b)).collect(),
            )
        })
}

/// Every assignment of values to `sites`, as cylinders.
fn all_cylinders(p: u64, sites: &[ExpVec]) -> Vec<CylinderSpec> {
    let total = p.pow(sites.len() as u32);
    (0..total)
        .map(|code| {
            let mut rest = code;
            let assignments: Vec<(ExpVec, i64)> = sites
                .iter()
                .map(|s| {
                    let value = (rest % p) as i64;
                    rest /= p;
                    (s.clone(), value)
                })
                .collect();
            CylinderSpec::new(p, 2, assignments).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The p^k cylinders over a fixed site set partition the space.
    #[test]
    fn measures_over_a_site_set_sum_to_one((system, sites) in arb_case(4)) {
        let p = u64::from(system.modulus());
        let mut total = Rational::zero();
        for cylinder in all_cylinders(p, &sites) {
            total += cylinder_measure(&system, &cylinder).unwrap().value();
        }
        prop_assert!(total.is_one(), "total {total} for sites {sites:?}");
    }

    /// Pinning one more site refines a cylinder into p disjoint pieces.
    #[test]
    fn marginals_are_consistent((system, sites) in arb_case(4)) {
        prop_assume!(sites.len() >= 2);
        let p = u64::from(system.modulus());
        let (extra, kept) = sites.split_last().unwrap();
        for base in all_cylinders(p, kept) {
            let coarse = cylinder_measure(&system, &base).unwrap();
            let mut refined = Rational::zero();
            for value in 0..p as i64 {
                let mut assignments: Vec<(ExpVec, i64)> = base
                    .assignments()
                    .map(|(s, c)| (s.clone(), i64::from(c.value())))
                    .collect();
                assignments.push((extra.clone(), value));
                let finer = CylinderSpec::new(p, 2, assignments).unwrap();
                refined += cylinder_measure(&system, &finer).unwrap().value();
            }
            prop_assert_eq!(coarse.value(), &refined);
        }
    }

    /// Haar measure is shift invariant.
    #[test]
    fn translation_preserves_measure(
        case in (arb_case(3), -3i32..=3, -3i32..=3)
    ) {
        let ((system, sites), dx, dy) = case;
        let p = u64::from(system.modulus());
        let shift = v(dx, dy);
        for cylinder in all_cylinders(p, &sites) {
            let moved = translate_cylinder(&cylinder, &shift).unwrap();
            prop_assert_eq!(
                cylinder_measure(&system, &cylinder).unwrap(),
                cylinder_measure(&system, &moved).unwrap()
            );
        }
    }

    /// The joint measure is exactly the measure of the merged cylinder, and
    /// conflicts mean measure zero.
    #[test]
    fn joint_measure_is_merge_then_measure(
        case in (
            0..SYSTEMS.len(),
            prop::collection::btree_set((-2i32..=2, -2i32..=2), 1..=3),
            prop::collection::btree_set((-2i32..=2, -2i32..=2), 1..=3),
            prop::num::u64::ANY,
            prop::num::u64::ANY,
        )
    ) {
        let (index, points_a, points_b, pick_a, pick_b) = case;
        let system = system(index);
        let p = u64::from(system.modulus());
        let sites_a: Vec<ExpVec> = points_a.into_iter().map(|(x, y)| v(x, y)).collect();
        let sites_b: Vec<ExpVec> = points_b.into_iter().map(|(x, y)| v(x, y)).collect();
        let pool_a = all_cylinders(p, &sites_a);
        let pool_b = all_cylinders(p, &sites_b);
        let a = pool_a[(pick_a % pool_a.len() as u64) as usize].clone();
        let b = pool_b[(pick_b % pool_b.len() as u64) as usize].clone();
        let joint = joint_measure(&system, &[a.clone(), b.clone()]).unwrap();
        match merge_cylinders(&a, &b).unwrap() {
            Some(merged) => {
                prop_assert_eq!(joint, cylinder_measure(&system, &merged).unwrap());
            }
            None => prop_assert!(joint.is_zero()),
        }
    }
}
