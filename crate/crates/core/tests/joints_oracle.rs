//! Joints and multiplicities against a brute-force reference that scans every
//! point of F_p^n and counts ordered tuples by determinant.

use joints_core::field::{FieldElement, FieldSpec};
use joints_core::generators::{
    axis_with_planar_pencil, generic_star, grid, plane_with_verticals, random_lines,
};
use joints_core::geometry::{joints, LineCollection, Point};
use proptest::prelude::*;

fn det(m: &[Vec<FieldElement>]) -> FieldElement {
    // Leibniz expansion over all permutations
    let n = m.len();
    let spec = m[0][0].spec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = spec.zero();
    permute(&mut perm, 0, &mut |p| {
        let mut term = spec.one();
        for (r, &c) in p.iter().enumerate() {
            term = &term * &m[r][c];
        }
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        total = if inversions % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn all_points(spec: FieldSpec, n: usize) -> Vec<Point> {
    let p = spec.order().unwrap() as i64;
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    loop {
        out.push(Point::from_i64(spec, &c).unwrap());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Ordered n-tuples of distinct lines through `x` with nonzero determinant.
fn tuple_count(c: &LineCollection, through: &[usize]) -> u64 {
    let n = c.dimension();
    let mut count = 0;
    let mut tuple = Vec::with_capacity(n);
    fn go(
        c: &LineCollection,
        through: &[usize],
        tuple: &mut Vec<usize>,
        n: usize,
        count: &mut u64,
    ) {
        if tuple.len() == n {
            let rows: Vec<Vec<FieldElement>> =
                tuple.iter().map(|&i| c.line(i).dir().to_vec()).collect();
            if !det(&rows).is_zero() {
                *count += 1;
            }
            return;
        }
        for &l in through {
            if !tuple.contains(&l) {
                tuple.push(l);
                go(c, through, tuple, n, count);
                tuple.pop();
            }
        }
    }
    go(c, through, &mut tuple, n, &mut count);
    count
}

fn brute_joints(c: &LineCollection) -> Vec<(Point, u64)> {
    let mut out = Vec::new();
    for x in all_points(c.spec(), c.dimension()) {
        let through: Vec<usize> = (0..c.len()).filter(|&i| c.line(i).contains(&x)).collect();
        let m = tuple_count(c, &through);
        if m > 0 {
            out.push((x, m));
        }
    }
    out.sort();
    out
}

fn fast_joints(c: &LineCollection) -> Vec<(Point, u64)> {
    joints(c)
        .unwrap()
        .into_iter()
        .map(|j| (j.point, j.multiplicity))
        .collect()
}

fn f(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

#[test]
fn plane_with_verticals_p3_matches_tuple_enumeration() {
    let c = plane_with_verticals(3).unwrap();
    let brute = brute_joints(&c);
    assert_eq!(brute.len(), 9);
    assert!(brute
        .iter()
        .all(|(x, m)| x.coords()[2].is_zero() && *m == 36));
    assert_eq!(fast_joints(&c), brute);
}

#[test]
fn grids_match_brute_force() {
    for (n, m, p) in [(3, 2, 5), (3, 3, 5), (4, 2, 3)] {
        let c = grid(n, m, f(p)).unwrap();
        let brute = brute_joints(&c);
        assert_eq!(brute.len() as u64, m.pow(n as u32));
        assert_eq!(fast_joints(&c), brute);
    }
}

#[test]
fn pencil_and_star_match_brute_force() {
    let c = axis_with_planar_pencil(4, f(5)).unwrap();
    assert_eq!(fast_joints(&c), brute_joints(&c));
    let c = generic_star(3, 4, f(5), 3).unwrap();
    let b = brute_joints(&c);
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].1, 24);
    assert_eq!(fast_joints(&c), b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_collections_match_brute_force(seed in any::<u64>(), l in 3usize..16, p in prop::sample::select(vec![2u64, 3, 5])) {
        let c = random_lines(3, l, f(p), seed).unwrap();
        prop_assert_eq!(fast_joints(&c), brute_joints(&c));
    }
}
