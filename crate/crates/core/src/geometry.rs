//! Points, canonical lines, intersections and joints in `F^n`.
//!
//! A point `x` is a joint of a line collection when at least `n` lines through
//! `x` have directions spanning `F^n`. Candidate joints are the pairwise
//! intersection points of the collection, so detection works the same way over
//! `Q` as over a finite field.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{rank_of, EchelonBasis, Matrix};

/// Default bound on the number of lines through a single point for which
/// `N(x)` is counted by subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension {0} not supported: lines in F^n need n >= 3")]
    Dimension(usize),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate field {got} differs from {expected}")]
    FieldMismatch { expected: FieldSpec, got: FieldSpec },
    #[error("line direction is the zero vector")]
    ZeroDirection,
    #[error("enumeration cap exceeded: {lines} lines through {point}, cap {cap}")]
    EnumerationCap {
        point: Point,
        lines: usize,
        cap: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<FieldElement>,
}

impl Point {
    /// A point of `F^n`, `n >= 3`, all coordinates in one field.
    pub fn new(coords: Vec<FieldElement>) -> Result<Self, GeometryError> {
        if coords.len() < 3 {
            return Err(GeometryError::Dimension(coords.len()));
        }
        let spec = coords[0].spec();
        if let Some(bad) = coords.iter().find(|c| c.spec() != spec) {
            return Err(GeometryError::FieldMismatch {
                expected: spec,
                got: bad.spec(),
            });
        }
        Ok(Point { coords })
    }

    pub fn from_i64(spec: FieldSpec, coords: &[i64]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn origin(spec: FieldSpec, n: usize) -> Result<Self, GeometryError> {
        Self::new(vec![spec.zero(); n])
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.coords[0].spec()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The point set `{base + t*dir : t in F}` in canonical form: `dir` is monic
/// (first nonzero coordinate 1) and `base` is zero at that coordinate, so two
/// `Line`s are equal exactly when they are the same set of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    base: Point,
    dir: Vec<FieldElement>,
}

impl Line {
    pub fn new(base: Point, dir: Vec<FieldElement>) -> Result<Self, GeometryError> {
        canonicalize_line(&base, &dir)
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn dir(&self) -> &[FieldElement] {
        &self.dir
    }

    pub fn dimension(&self) -> usize {
        self.dir.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.base.spec()
    }

    fn pivot(&self) -> usize {
        self.dir
            .iter()
            .position(|e| !e.is_zero())
            .expect("direction is nonzero")
    }

    /// `base + t*dir`.
    pub fn at(&self, t: &FieldElement) -> Point {
        Point {
            coords: self
                .base
                .coords
                .iter()
                .zip(&self.dir)
                .map(|(v, b)| v + &(t * b))
                .collect(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.dimension() != self.dimension() || x.spec() != self.spec() {
            return false;
        }
        // the pivot coordinate of base is 0 and of dir is 1, so t = x[pivot]
        let t = &x.coords[self.pivot()];
        x.coords
            .iter()
            .zip(self.base.coords.iter().zip(&self.dir))
            .all(|(xi, (vi, bi))| *xi == vi + &(t * bi))
    }

    /// Every point of the line; `None` over `Q`.
    pub fn points(&self) -> Option<Vec<Point>> {
        Some(self.spec().elements()?.map(|t| self.at(&t)).collect())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + t(", self.base)?;
        for (i, c) in self.dir.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Unique representative of the line through `v` with direction `b`.
pub fn canonicalize_line(v: &Point, b: &[FieldElement]) -> Result<Line, GeometryError> {
    if b.len() != v.dimension() {
        return Err(GeometryError::DimensionMismatch {
            expected: v.dimension(),
            got: b.len(),
        });
    }
    if let Some(bad) = b.iter().find(|e| e.spec() != v.spec()) {
        return Err(GeometryError::FieldMismatch {
            expected: v.spec(),
            got: bad.spec(),
        });
    }
    let pivot = b
        .iter()
        .position(|e| !e.is_zero())
        .ok_or(GeometryError::ZeroDirection)?;
    let scale = b[pivot].inv().expect("pivot is nonzero");
    let dir: Vec<FieldElement> = b.iter().map(|e| e * &scale).collect();
    let shift = &v.coords[pivot];
    let base = v
        .coords
        .iter()
        .zip(&dir)
        .map(|(vi, di)| vi - &(shift * di))
        .collect();
    Ok(Line {
        base: Point { coords: base },
        dir,
    })
}

/// The unique common point of two distinct, non-parallel, meeting lines.
pub fn intersect(l1: &Line, l2: &Line) -> Option<Point> {
    if l1.spec() != l2.spec() || l1.dimension() != l2.dimension() || l1.dir == l2.dir {
        // equal monic directions: parallel or identical
        return None;
    }
    let spec = l1.spec();
    let n = l1.dimension();
    // base1 + s*d1 = base2 + t*d2  <=>  [d1 | -d2] (s, t)^T = base2 - base1
    let mut entries = Vec::with_capacity(2 * n);
    for i in 0..n {
        entries.push(l1.dir[i].clone());
        entries.push(-&l2.dir[i]);
    }
    let m = Matrix::new(spec, n, 2, entries).expect("shape");
    let rhs: Vec<_> = (0..n)
        .map(|i| &l2.base.coords[i] - &l1.base.coords[i])
        .collect();
    let st = m.solve(&rhs)?;
    Some(l1.at(&st[0]))
}

/// A deduplicated, ordered collection of lines in `F^n`, `n >= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCollection {
    spec: FieldSpec,
    n: usize,
    lines: Vec<Line>,
    merged_duplicates: usize,
}

impl LineCollection {
    /// Keeps the first occurrence of each line; later duplicates are counted
    /// in [`LineCollection::merged_duplicates`].
    pub fn new(spec: FieldSpec, n: usize, lines: Vec<Line>) -> Result<Self, GeometryError> {
        if n < 3 {
            return Err(GeometryError::Dimension(n));
        }
        let mut seen = HashSet::with_capacity(lines.len());
        let mut kept = Vec::with_capacity(lines.len());
        let mut merged = 0;
        for l in lines {
            if l.dimension() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: l.dimension(),
                });
            }
            if l.spec() != spec {
                return Err(GeometryError::FieldMismatch {
                    expected: spec,
                    got: l.spec(),
                });
            }
            if seen.insert(l.clone()) {
                kept.push(l);
            } else {
                merged += 1;
            }
        }
        Ok(LineCollection {
            spec,
            n,
            lines: kept,
            merged_duplicates: merged,
        })
    }

    pub fn empty(spec: FieldSpec, n: usize) -> Result<Self, GeometryError> {
        Self::new(spec, n, Vec::new())
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &Line {
        &self.lines[i]
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn merged_duplicates(&self) -> usize {
        self.merged_duplicates
    }

    pub fn index_of(&self, l: &Line) -> Option<usize> {
        self.lines.iter().position(|m| m == l)
    }

    /// Indices of lines through `x`, ascending.
    pub fn incident_lines(&self, x: &Point) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&i| self.lines[i].contains(x))
            .collect()
    }

    /// The sub-collection with the given line indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LineCollection {
        LineCollection {
            spec: self.spec,
            n: self.n,
            lines: indices.iter().map(|&i| self.lines[i].clone()).collect(),
            merged_duplicates: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointRecord {
    pub point: Point,
    /// Indices into the collection, ascending.
    pub incident_lines: Vec<usize>,
    /// `N(x)`: ordered `n`-tuples of lines through `x` with spanning directions.
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointOptions {
    pub enumeration_cap: usize,
}

impl Default for JointOptions {
    fn default() -> Self {
        JointOptions {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// All pairwise intersection points with the lines through each, sorted by point.
pub fn intersection_points(c: &LineCollection) -> BTreeMap<Point, Vec<usize>> {
    let lines = c.lines();
    let pairs: Vec<(Point, usize, usize)> = (0..lines.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..lines.len())
                .filter_map(move |j| intersect(&lines[i], &lines[j]).map(|x| (x, i, j)))
        })
        .collect();
    let mut map: BTreeMap<Point, BTreeSet<usize>> = BTreeMap::new();
    for (x, i, j) in pairs {
        let e = map.entry(x).or_default();
        e.insert(i);
        e.insert(j);
    }
    map.into_iter()
        .map(|(x, s)| (x, s.into_iter().collect()))
        .collect()
}

fn n_factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of `n`-subsets of `dirs` that are linearly independent. Partial
/// subsets that are already dependent are pruned.
pub fn count_spanning_subsets(spec: FieldSpec, dirs: &[&[FieldElement]], n: usize) -> u64 {
    fn go(dirs: &[&[FieldElement]], start: usize, need: usize, basis: &EchelonBasis) -> u64 {
        if need == 0 {
            return 1;
        }
        let mut total = 0;
        for i in start..=dirs.len().saturating_sub(need) {
            if let Some(next) = basis.extended(dirs[i]) {
                total += go(dirs, i + 1, need - 1, &next);
            }
        }
        total
    }
    if dirs.len() < n {
        return 0;
    }
    go(dirs, 0, n, &EchelonBasis::new(spec))
}

/// First `n`-subset (lexicographic in position) with rank `< n`, as positions.
fn find_dependent_subset(
    spec: FieldSpec,
    dirs: &[&[FieldElement]],
    n: usize,
) -> Option<Vec<usize>> {
    fn go(
        spec: FieldSpec,
        dirs: &[&[FieldElement]],
        start: usize,
        chosen: &mut Vec<usize>,
        n: usize,
    ) -> Option<Vec<usize>> {
        if chosen.len() == n {
            let vs: Vec<&[FieldElement]> = chosen.iter().map(|&i| dirs[i]).collect();
            return (rank_of(spec, &vs) < n).then(|| chosen.clone());
        }
        for i in start..=dirs.len() - (n - chosen.len()) {
            chosen.push(i);
            if let Some(w) = go(spec, dirs, i + 1, chosen, n) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }
    if dirs.len() < n {
        return None;
    }
    go(spec, dirs, 0, &mut Vec::with_capacity(n), n)
}

fn directions<'a>(c: &'a LineCollection, idx: &[usize]) -> Vec<&'a [FieldElement]> {
    idx.iter().map(|&i| c.line(i).dir()).collect()
}

/// `N(x)` given the lines through `x`, honoring the enumeration cap.
pub fn multiplicity_of_lines(
    c: &LineCollection,
    x: &Point,
    through: &[usize],
    opts: &JointOptions,
) -> Result<u64, GeometryError> {
    let n = c.dimension();
    let dirs = directions(c, through);
    if through.len() < n || rank_of(c.spec(), &dirs) < n {
        return Ok(0);
    }
    if through.len() > opts.enumeration_cap {
        return Err(GeometryError::EnumerationCap {
            point: x.clone(),
            lines: through.len(),
            cap: opts.enumeration_cap,
        });
    }
    Ok(n_factorial(n) * count_spanning_subsets(c.spec(), &dirs, n))
}

/// `N(x)`; 0 when `x` is not a joint.
pub fn multiplicity(x: &Point, c: &LineCollection) -> Result<u64, GeometryError> {
    multiplicity_with(x, c, &JointOptions::default())
}

pub fn multiplicity_with(
    x: &Point,
    c: &LineCollection,
    opts: &JointOptions,
) -> Result<u64, GeometryError> {
    multiplicity_of_lines(c, x, &c.incident_lines(x), opts)
}

/// True when the lines with the given indices have directions spanning `F^n`.
pub fn spans(c: &LineCollection, idx: &[usize]) -> bool {
    idx.len() >= c.dimension() && rank_of(c.spec(), &directions(c, idx)) == c.dimension()
}

/// The joint set with multiplicities, sorted by point.
pub fn joints(c: &LineCollection) -> Result<Vec<JointRecord>, GeometryError> {
    joints_with(c, &JointOptions::default())
}

pub fn joints_with(
    c: &LineCollection,
    opts: &JointOptions,
) -> Result<Vec<JointRecord>, GeometryError> {
    let candidates: Vec<(Point, Vec<usize>)> = intersection_points(c)
        .into_iter()
        .filter(|(_, ls)| spans(c, ls))
        .collect();
    candidates
        .into_par_iter()
        .map(|(point, incident_lines)| {
            let multiplicity = multiplicity_of_lines(c, &point, &incident_lines, opts)?;
            Ok(JointRecord {
                point,
                incident_lines,
                multiplicity,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityWitness {
    pub point: Point,
    /// `n` concurrent lines whose directions do not span.
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genericity {
    pub generic: bool,
    pub witness: Option<GenericityWitness>,
}

/// Whether every `n` distinct concurrent lines have spanning directions.
/// The witness is the first offending `n`-subset at the smallest such point.
pub fn is_generic(c: &LineCollection) -> Result<Genericity, GeometryError> {
    is_generic_with(c, &JointOptions::default())
}

pub fn is_generic_with(
    c: &LineCollection,
    opts: &JointOptions,
) -> Result<Genericity, GeometryError> {
    let n = c.dimension();
    for (point, through) in intersection_points(c) {
        if through.len() < n {
            continue;
        }
        if through.len() > opts.enumeration_cap {
            return Err(GeometryError::EnumerationCap {
                point,
                lines: through.len(),
                cap: opts.enumeration_cap,
            });
        }
        let dirs = directions(c, &through);
        if let Some(pos) = find_dependent_subset(c.spec(), &dirs, n) {
            return Ok(Genericity {
                generic: false,
                witness: Some(GenericityWitness {
                    point,
                    lines: pos.into_iter().map(|i| through[i]).collect(),
                }),
            });
        }
    }
    Ok(Genericity {
        generic: true,
        witness: None,
    })
}

/// Members of `k` lying on `l`, in input order.
pub fn points_on_line_in_set(l: &Line, k: &[Point]) -> Vec<Point> {
    k.iter().filter(|x| l.contains(x)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn pt(spec: FieldSpec, c: &[i64]) -> Point {
        Point::from_i64(spec, c).unwrap()
    }

    fn line(spec: FieldSpec, base: &[i64], dir: &[i64]) -> Line {
        Line::new(
            pt(spec, base),
            dir.iter().map(|&d| spec.from_i64(d)).collect(),
        )
        .unwrap()
    }

    fn axes(spec: FieldSpec) -> LineCollection {
        let lines = vec![
            line(spec, &[0, 0, 0], &[1, 0, 0]),
            line(spec, &[0, 0, 0], &[0, 1, 0]),
            line(spec, &[0, 0, 0], &[0, 0, 1]),
        ];
        LineCollection::new(spec, 3, lines).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let f5 = f(5);
        let l = line(f5, &[1, 1, 1], &[0, 2, 0]);
        assert_eq!(l.dir(), pt(f5, &[0, 1, 0]).coords());
        assert_eq!(l.base(), &pt(f5, &[1, 0, 1]));
        let l0 = line(f5, &[0, 0, 0], &[1, 0, 0]);
        assert_eq!(l0.base(), &pt(f5, &[0, 0, 0]));
        assert_eq!(l0.dir(), pt(f5, &[1, 0, 0]).coords());
        // any base on the line through 0 with direction (2,3,4)
        let f7 = f(7);
        let through_origin = line(f7, &[0, 0, 0], &[2, 3, 4]);
        for t in 0..7 {
            let v = [2 * t, 3 * t, 4 * t];
            for s in 1..7 {
                assert_eq!(line(f7, &v, &[2 * s, 3 * s, 4 * s]), through_origin);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f5 = f(5);
        assert_eq!(
            Line::new(pt(f5, &[0, 0, 0]), vec![f5.zero(); 3]),
            Err(GeometryError::ZeroDirection)
        );
        assert_eq!(
            Point::from_i64(f5, &[1, 2]),
            Err(GeometryError::Dimension(2))
        );
        assert!(matches!(
            LineCollection::new(f5, 2, vec![]),
            Err(GeometryError::Dimension(2))
        ));
        let l4 = line(f5, &[0, 0, 0, 0], &[1, 0, 0, 0]);
        assert!(matches!(
            LineCollection::new(f5, 3, vec![l4]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersections() {
        let f7 = f(7);
        let x = line(f7, &[0, 0, 0], &[1, 0, 0]);
        let y = line(f7, &[0, 0, 0], &[0, 1, 0]);
        assert_eq!(intersect(&x, &y), Some(pt(f7, &[0, 0, 0])));
        let x2 = line(f7, &[0, 1, 0], &[1, 0, 0]);
        assert_eq!(intersect(&x, &x2), None);
        assert_eq!(intersect(&x, &x), None);
        let skew = line(f7, &[0, 0, 1], &[0, 1, 0]);
        assert_eq!(intersect(&x, &skew), None);
        let f5 = f(5);
        let a = line(f5, &[0, 0, 0], &[1, 0, 0]);
        let b = line(f5, &[1, 0, 0], &[0, 1, 0]);
        assert_eq!(intersect(&a, &b), Some(pt(f5, &[1, 0, 0])));
    }

    #[test]
    fn three_axes_form_one_joint() {
        let js = joints(&axes(f(7))).unwrap();
        assert_eq!(js.len(), 1);
        assert_eq!(js[0].point, pt(f(7), &[0, 0, 0]));
        assert_eq!(js[0].multiplicity, 6);
        assert_eq!(js[0].incident_lines, vec![0, 1, 2]);
    }

    #[test]
    fn multiplicity_of_non_incident_point_is_zero() {
        let c = axes(f(7));
        assert_eq!(multiplicity(&pt(f(7), &[1, 1, 1]), &c).unwrap(), 0);
        assert_eq!(multiplicity(&pt(f(7), &[1, 0, 0]), &c).unwrap(), 0);
    }

    #[test]
    fn enumeration_cap_is_reported() {
        let c = axes(f(7));
        let opts = JointOptions { enumeration_cap: 2 };
        assert!(matches!(
            joints_with(&c, &opts),
            Err(GeometryError::EnumerationCap {
                lines: 3,
                cap: 2,
                ..
            })
        ));
    }

    #[test]
    fn coplanar_triple_is_not_generic() {
        let f7 = f(7);
        let lines = vec![
            line(f7, &[0, 0, 0], &[1, 0, 0]),
            line(f7, &[0, 0, 0], &[0, 1, 0]),
            line(f7, &[0, 0, 0], &[1, 1, 0]),
        ];
        let c = LineCollection::new(f7, 3, lines).unwrap();
        let g = is_generic(&c).unwrap();
        assert!(!g.generic);
        let w = g.witness.unwrap();
        assert_eq!(w.lines, vec![0, 1, 2]);
        assert!(joints(&c).unwrap().is_empty());
        assert!(is_generic(&axes(f7)).unwrap().generic);
    }

    #[test]
    fn duplicates_merge() {
        let f5 = f(5);
        let lines = vec![
            line(f5, &[0, 0, 0], &[1, 0, 0]),
            line(f5, &[3, 0, 0], &[2, 0, 0]),
        ];
        let c = LineCollection::new(f5, 3, lines).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.merged_duplicates(), 1);
    }

    #[test]
    fn points_on_line() {
        let f5 = f(5);
        let l = line(f5, &[0, 0, 0], &[1, 0, 0]);
        let all = l.points().unwrap();
        assert_eq!(points_on_line_in_set(&l, &all).len(), 5);
        let off = vec![pt(f5, &[0, 1, 0]), pt(f5, &[2, 2, 2])];
        assert!(points_on_line_in_set(&l, &off).is_empty());
    }
}
