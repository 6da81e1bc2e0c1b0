use std::collections::BTreeSet;

use joints_core::algorithms::{choice_lower_bound, choose, peel, theorem1_bound, theorem2_bound};
use joints_core::field::FieldSpec;
use joints_core::generators::{generic_multi_star, generic_star, grid, random_lines};
use joints_core::geometry::{joints, LineCollection, Point};
use joints_core::interpolation::{dstar, minimal_vanishing_polynomial, vanishing_polynomial};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn falling(k: u64, n: u64) -> u64 {
    (0..n).map(|i| k.saturating_sub(i)).product()
}

fn collection() -> impl Strategy<Value = LineCollection> {
    (
        any::<u64>(),
        3usize..30,
        prop::sample::select(vec![3u64, 5, 7]),
    )
        .prop_map(|(seed, l, p)| random_lines(3, l, f(p), seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn joints_ignore_line_order(c in collection(), seed in any::<u64>()) {
        let mut lines = c.lines().to_vec();
        lines.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let d = LineCollection::new(c.spec(), 3, lines).unwrap();
        let a: Vec<_> = joints(&c).unwrap().into_iter().map(|j| (j.point, j.multiplicity)).collect();
        let b: Vec<_> = joints(&d).unwrap().into_iter().map(|j| (j.point, j.multiplicity)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn multiplicity_is_a_multiple_of_n_factorial(c in collection()) {
        for j in joints(&c).unwrap() {
            let k = j.incident_lines.len() as u64;
            prop_assert!(j.multiplicity >= 6);
            prop_assert_eq!(j.multiplicity % 6, 0);
            prop_assert!(j.multiplicity <= falling(k, 3));
        }
    }

    #[test]
    fn peeling_partitions_the_joints(c in collection()) {
        let js: BTreeSet<Point> = joints(&c).unwrap().into_iter().map(|j| j.point).collect();
        let t = peel(&c).unwrap();
        prop_assert!(t.parts().count() <= c.len());
        let mut seen = BTreeSet::new();
        for s in t.parts() {
            prop_assert!(s.points.len() as u32 <= dstar(3, s.remaining_before as u64));
            prop_assert!(s.points.len() as u32 <= dstar(3, js.len() as u64));
            for x in &s.points {
                prop_assert!(c.line(s.line).contains(x));
                prop_assert!(seen.insert(x.clone()));
            }
        }
        prop_assert_eq!(seen, js);
    }

    #[test]
    fn joint_count_within_theorem1_bound(c in collection()) {
        let j = joints(&c).unwrap().len() as u64;
        prop_assert!(j <= theorem1_bound(c.len() as u64, 3));
        prop_assert!(j <= c.len() as u64 * dstar(3, j) as u64);
    }

    #[test]
    fn vanishing_polynomials_vanish(seed in any::<u64>(), k in 1usize..25, p in prop::sample::select(vec![5u64, 7, 11])) {
        let spec = f(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Point> = (0..k)
            .map(|_| Point::new((0..3).map(|_| spec.from_u64(rng.gen_range(0..p))).collect()).unwrap())
            .collect();
        let m = minimal_vanishing_polynomial(&pts).unwrap();
        prop_assert!(m.degree <= dstar(3, k as u64));
        for x in &pts {
            prop_assert!(m.polynomial.evaluate(x.coords()).unwrap().is_zero());
        }
        if m.degree > 0 {
            prop_assert!(vanishing_polynomial(&pts, m.degree - 1).unwrap().is_none());
        }
    }

    #[test]
    fn dstar_is_monotone(n in 1usize..6, m in 0u64..100_000) {
        prop_assert!(dstar(n, m) <= dstar(n, m + 1));
    }
}

fn check_choice(c: &LineCollection) {
    let records = joints(c).unwrap();
    let max_n = records.iter().map(|j| j.multiplicity).max().unwrap_or(1);
    let l = c.len() as u64;
    for lambda in [1, 6, max_n] {
        let a = choose(c, lambda).unwrap();
        let jl = a.j_lambda() as u64;
        let q = choice_lower_bound(lambda, 3);
        assert!(jl as i64 * q <= (l * dstar(3, jl) as u64) as i64);
        assert!(jl <= theorem2_bound(l, 3, lambda));
        for p in &a.points {
            assert!(p.lines.len() as i64 >= q);
        }
        assert!(a.max_choosers() <= a.per_line_upper_bound());
    }
}

#[test]
fn choosing_on_generic_collections() {
    for seed in 0..5 {
        check_choice(&generic_star(3, 8 + seed as usize, f(101), seed).unwrap());
        check_choice(&generic_multi_star(3, 3, 5, f(101), seed).unwrap());
    }
    for m in 1..=3 {
        check_choice(&grid(3, m, f(101)).unwrap());
    }
}

#[test]
fn theorem2_is_never_weaker_than_theorem1() {
    for l in 0..200 {
        for lambda in [1, 6, 27, 64, 1000, 6840] {
            assert!(theorem2_bound(l, 3, lambda) <= theorem1_bound(l, 3));
        }
    }
}
