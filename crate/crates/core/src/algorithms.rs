//! Combinatorial procedures built on the vanishing-polynomial bound.
//!
//! Every "constant depending only on n" is made explicit through
//! [`dstar`]: if `K` is a set of joints of a collection, some line of the
//! collection meets `K` in at most `dstar(|K|)` points. Peeling, the
//! choosing procedure and both joint bounds are stated and checked with that
//! constant.

use std::collections::{HashMap, HashSet};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::generators::{plane_with_verticals, GenerationError};
use crate::geometry::{
    is_generic, joints, spans, GenericityWitness, GeometryError, JointRecord, LineCollection, Point,
};
use crate::interpolation::{
    dstar, minimal_vanishing_polynomial, InterpolationError, MinimalVanishing,
};
use crate::polynomial::{MultivariatePolynomial, PolynomialError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgorithmError {
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("collection is not generic: lines {:?} meet at {} without spanning", .0.lines, .0.point)]
    NotGeneric(GenericityWitness),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error(transparent)]
    Interpolation(#[from] InterpolationError),
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
}

/// Smallest `k` with `k^n >= x`.
pub fn ceil_root(x: u64, n: u32) -> u64 {
    let fits = |k: u64| (k as u128).checked_pow(n).is_none_or(|v| v >= x as u128);
    let mut k = (x as f64).powf(1.0 / n as f64).floor() as u64;
    k = k.saturating_sub(2);
    while !fits(k) {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LightLine {
    pub line: usize,
    pub count: usize,
}

/// The line minimizing `|l ∩ K|` (lowest index on ties). `K` must be a
/// nonempty set of joints of `c`; the count is checked against `dstar(|K|)`.
pub fn extract_light_line(c: &LineCollection, k: &[Point]) -> Result<LightLine, AlgorithmError> {
    if k.is_empty() {
        return Err(AlgorithmError::Contract("K is empty".into()));
    }
    let joint_set: HashSet<Point> = joints(c)?.into_iter().map(|j| j.point).collect();
    if let Some(x) = k.iter().find(|x| !joint_set.contains(x)) {
        return Err(AlgorithmError::Contract(format!("{x} is not a joint")));
    }
    let (line, count) = (0..c.len())
        .map(|i| (i, k.iter().filter(|x| c.line(i).contains(x)).count()))
        .min_by_key(|&(i, n)| (n, i))
        .expect("a collection with joints has lines");
    let bound = dstar(c.dimension(), k.len() as u64) as usize;
    if count > bound {
        return Err(AlgorithmError::InvariantViolation(format!(
            "lightest line meets K in {count} > dstar(|K|) = {bound} points"
        )));
    }
    Ok(LightLine { line, count })
}

/// Line/joint incidences shared by the greedy procedures.
struct Incidence {
    joints: Vec<JointRecord>,
    /// joint indices on each line
    on_line: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(c: &LineCollection) -> Result<Self, GeometryError> {
        let joints = joints(c)?;
        let mut on_line = vec![Vec::new(); c.len()];
        for (j, rec) in joints.iter().enumerate() {
            for &l in &rec.incident_lines {
                on_line[l].push(j);
            }
        }
        Ok(Incidence { joints, on_line })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    pub line: usize,
    /// `l_j ∩ K_{j-1}`, sorted.
    pub points: Vec<Point>,
    /// `|K_{j-1}|` when this step ran.
    pub remaining_before: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelingTrace {
    pub n: usize,
    pub line_count: usize,
    pub joint_count: usize,
    pub steps: Vec<PeelStep>,
}

impl PeelingTrace {
    /// The nonempty extracted sets.
    pub fn parts(&self) -> impl Iterator<Item = &PeelStep> {
        self.steps.iter().filter(|s| !s.points.is_empty())
    }

    pub fn max_part(&self) -> usize {
        self.steps.iter().map(|s| s.points.len()).max().unwrap_or(0)
    }
}

/// Repeatedly removes the line carrying the fewest remaining joints, together
/// with those joints, until no joints remain.
pub fn peel(c: &LineCollection) -> Result<PeelingTrace, AlgorithmError> {
    let inc = Incidence::new(c)?;
    let n = c.dimension();
    let mut remaining = vec![true; inc.joints.len()];
    let mut left = inc.joints.len();
    let mut active = vec![true; c.len()];
    let mut count: Vec<usize> = inc.on_line.iter().map(Vec::len).collect();
    let mut steps = Vec::new();
    while left > 0 {
        let line = (0..c.len())
            .filter(|&l| active[l])
            .min_by_key(|&l| (count[l], l))
            .ok_or_else(|| {
                AlgorithmError::InvariantViolation("joints remain but no lines do".into())
            })?;
        let taken: Vec<usize> = inc.on_line[line]
            .iter()
            .copied()
            .filter(|&j| remaining[j])
            .collect();
        let bound = dstar(n, left as u64) as usize;
        if taken.len() > bound {
            return Err(AlgorithmError::InvariantViolation(format!(
                "peeling step {} extracted {} > dstar({left}) = {bound} joints",
                steps.len() + 1,
                taken.len()
            )));
        }
        for &j in &taken {
            remaining[j] = false;
            for &l in &inc.joints[j].incident_lines {
                count[l] -= 1;
            }
        }
        active[line] = false;
        steps.push(PeelStep {
            line,
            points: taken.iter().map(|&j| inc.joints[j].point.clone()).collect(),
            remaining_before: left,
        });
        left -= taken.len();
    }
    Ok(PeelingTrace {
        n,
        line_count: c.len(),
        joint_count: inc.joints.len(),
        steps,
    })
}

/// Largest `B` with `B * weight <= L * dstar(B)`.
///
/// Scans the runs of constant `dstar`: `dstar(B) = d` exactly for
/// `C(d-1+n, n) <= B < C(d+n, n)`. The run start grows faster than `L*d/weight`,
/// so the scan stops at the first run that is entirely infeasible.
fn largest_feasible(l: u64, n: usize, weight: u64) -> u64 {
    use crate::interpolation::monomial_count;
    let mut best = 0u64;
    for d in 1u32.. {
        let lo = monomial_count(n, d - 1);
        let hi = monomial_count(n, d) - 1;
        let cap = (l as u128 * d as u128) / weight as u128;
        if lo > cap {
            break;
        }
        best = best.max(hi.min(cap) as u64);
    }
    best
}

/// Explicit joint bound for `L` lines in `F^n`: the largest `B` with
/// `B <= L * dstar(B)`. Peeling shows every collection satisfies `|J| <= L * dstar(|J|)`.
pub fn theorem1_bound(l: u64, n: usize) -> u64 {
    largest_feasible(l, n, 1)
}

/// Per-point lower bound on lines chosen, `ceil(lambda^(1/n)) - n + 1`.
pub fn choice_lower_bound(lambda: u64, n: usize) -> i64 {
    ceil_root(lambda, n as u32) as i64 - n as i64 + 1
}

/// Bound on `|J_lambda|` for generic collections from the counting identity
/// `|J_lambda| * q <= L * dstar(|J_lambda|)`, `q = ceil(lambda^(1/n)) - n + 1`.
/// Falls back to [`theorem1_bound`] when `q < 1`.
pub fn theorem2_bound(l: u64, n: usize, lambda: u64) -> u64 {
    let q = choice_lower_bound(lambda, n);
    if q < 1 {
        theorem1_bound(l, n)
    } else {
        largest_feasible(l, n, q as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceStep {
    pub line: usize,
    /// Points of `J_lambda` on this line that are still joints of the
    /// remaining collection just before it is removed.
    pub choosers: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointChoice {
    pub point: Point,
    pub multiplicity: u64,
    /// Collection indices of the lines this point chose, in step order.
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceAssignment {
    pub lambda: u64,
    pub n: usize,
    pub line_count: usize,
    pub steps: Vec<ChoiceStep>,
    /// One entry per point of `J_lambda`, sorted by point.
    pub points: Vec<PointChoice>,
}

impl ChoiceAssignment {
    pub fn chosen_lines(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.line).collect()
    }

    pub fn j_lambda(&self) -> usize {
        self.points.len()
    }

    pub fn per_point_lower_bound(&self) -> i64 {
        choice_lower_bound(self.lambda, self.n)
    }

    pub fn per_line_upper_bound(&self) -> usize {
        dstar(self.n, self.points.len() as u64) as usize
    }

    pub fn min_choices(&self) -> Option<usize> {
        self.points.iter().map(|p| p.lines.len()).min()
    }

    pub fn max_choosers(&self) -> usize {
        self.steps
            .iter()
            .map(|s| s.choosers.len())
            .max()
            .unwrap_or(0)
    }

    /// Checks coverage and both per-point and per-line bounds.
    pub fn verify(&self) -> Result<(), AlgorithmError> {
        let lower = self.per_point_lower_bound();
        for p in &self.points {
            if p.lines.is_empty() {
                return Err(AlgorithmError::InvariantViolation(format!(
                    "{} chose no line",
                    p.point
                )));
            }
            if (p.lines.len() as i64) < lower {
                return Err(AlgorithmError::InvariantViolation(format!(
                    "{} chose {} lines, fewer than {lower}",
                    p.point,
                    p.lines.len()
                )));
            }
        }
        let upper = self.per_line_upper_bound();
        if let Some(s) = self.steps.iter().find(|s| s.choosers.len() > upper) {
            return Err(AlgorithmError::InvariantViolation(format!(
                "line {} chosen by {} > dstar(|J_lambda|) = {upper} points",
                s.line,
                s.choosers.len()
            )));
        }
        Ok(())
    }
}

/// The greedy choosing process without a genericity check: at each step remove
/// the remaining line meeting the fewest points of `J_lambda ∩ J(remaining)`
/// (lowest index on ties), until the remaining collection has no joints.
/// A point chooses the removed line if it lies on it and was still such a point.
pub fn run_greedy_choice(
    c: &LineCollection,
    lambda: u64,
) -> Result<ChoiceAssignment, AlgorithmError> {
    if lambda == 0 {
        return Err(AlgorithmError::InvalidParameter(
            "lambda must be >= 1".into(),
        ));
    }
    let inc = Incidence::new(c)?;
    let in_lambda: Vec<bool> = inc
        .joints
        .iter()
        .map(|j| j.multiplicity >= lambda)
        .collect();
    let mut is_joint = vec![true; inc.joints.len()];
    let mut through: Vec<Vec<usize>> = inc
        .joints
        .iter()
        .map(|j| j.incident_lines.clone())
        .collect();
    let mut active = vec![true; c.len()];
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); inc.joints.len()];
    let mut steps = Vec::new();
    while is_joint.iter().any(|&b| b) {
        let live = |l: usize| {
            inc.on_line[l]
                .iter()
                .filter(|&&j| in_lambda[j] && is_joint[j])
                .count()
        };
        let line = (0..c.len())
            .filter(|&l| active[l])
            .min_by_key(|&l| (live(l), l))
            .ok_or_else(|| {
                AlgorithmError::InvariantViolation("joints remain but no lines do".into())
            })?;
        let mut choosers = Vec::new();
        for &j in &inc.on_line[line] {
            if in_lambda[j] && is_joint[j] {
                chosen[j].push(line);
                choosers.push(inc.joints[j].point.clone());
            }
        }
        active[line] = false;
        for &j in &inc.on_line[line] {
            through[j].retain(|&l| l != line);
            if is_joint[j] {
                is_joint[j] = spans(c, &through[j]);
            }
        }
        steps.push(ChoiceStep { line, choosers });
    }
    let points = inc
        .joints
        .iter()
        .zip(chosen)
        .filter(|(j, _)| j.multiplicity >= lambda)
        .map(|(j, lines)| PointChoice {
            point: j.point.clone(),
            multiplicity: j.multiplicity,
            lines,
        })
        .collect();
    Ok(ChoiceAssignment {
        lambda,
        n: c.dimension(),
        line_count: c.len(),
        steps,
        points,
    })
}

/// The choosing procedure on a generic collection, with its guarantees verified.
pub fn choose(c: &LineCollection, lambda: u64) -> Result<ChoiceAssignment, AlgorithmError> {
    if lambda == 0 {
        return Err(AlgorithmError::InvalidParameter(
            "lambda must be >= 1".into(),
        ));
    }
    let g = is_generic(c)?;
    if let Some(w) = g.witness {
        return Err(AlgorithmError::NotGeneric(w));
    }
    let a = run_greedy_choice(c, lambda)?;
    a.verify()?;
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingReport {
    pub lambda: u64,
    pub n: usize,
    pub line_count: usize,
    pub trials: usize,
    pub seed: u64,
    pub keep_probability: f64,
    /// Joints with `N(x) >= lambda`.
    pub tracked: Vec<Point>,
    pub kept_counts: Vec<usize>,
    /// `survived[trial][i]`: tracked point `i` is a joint of the sampled collection.
    pub survived: Vec<Vec<bool>>,
}

impl SamplingReport {
    pub fn mean_kept(&self) -> f64 {
        self.kept_counts.iter().sum::<usize>() as f64 / self.trials as f64
    }

    pub fn expected_kept(&self) -> f64 {
        self.line_count as f64 * self.keep_probability
    }

    /// Standard error of the mean kept count under the binomial model.
    pub fn standard_error(&self) -> f64 {
        let p = self.keep_probability;
        (self.line_count as f64 * p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn survivors(&self, trial: usize) -> usize {
        self.survived[trial].iter().filter(|&&b| b).count()
    }

    /// Fraction of trials in which tracked point `i` stayed a joint.
    pub fn survival_frequency_of(&self, i: usize) -> f64 {
        self.survived.iter().filter(|s| s[i]).count() as f64 / self.trials as f64
    }

    /// Fraction of all (trial, tracked point) pairs that survived.
    pub fn survival_frequency(&self) -> f64 {
        if self.tracked.is_empty() {
            return 0.0;
        }
        let total: usize = (0..self.trials).map(|t| self.survivors(t)).sum();
        total as f64 / (self.trials * self.tracked.len()) as f64
    }
}

/// Keeps each line independently with probability `lambda^(-1/n)` and records,
/// per trial, which joints of multiplicity `>= lambda` remain joints.
/// Trial `t` draws from its own ChaCha stream, so results do not depend on
/// scheduling.
pub fn sample_survival(
    c: &LineCollection,
    lambda: u64,
    trials: usize,
    seed: u64,
) -> Result<SamplingReport, AlgorithmError> {
    if lambda == 0 {
        return Err(AlgorithmError::InvalidParameter(
            "lambda must be >= 1".into(),
        ));
    }
    if trials == 0 {
        return Err(AlgorithmError::InvalidParameter(
            "trials must be >= 1".into(),
        ));
    }
    let n = c.dimension();
    let tracked: Vec<JointRecord> = joints(c)?
        .into_iter()
        .filter(|j| j.multiplicity >= lambda)
        .collect();
    let prob = (lambda as f64).powf(-1.0 / n as f64);
    // keep iff a uniform u64 draw falls below prob * 2^64
    let threshold = (prob * 2f64.powi(64)).floor();
    let keep_all = prob >= 1.0;
    let threshold = threshold as u64;
    let results: Vec<(usize, Vec<bool>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let kept: Vec<bool> = (0..c.len())
                .map(|_| {
                    let draw = rng.next_u64();
                    keep_all || draw < threshold
                })
                .collect();
            let count = kept.iter().filter(|&&b| b).count();
            let flags = tracked
                .iter()
                .map(|j| {
                    let live: Vec<usize> = j
                        .incident_lines
                        .iter()
                        .copied()
                        .filter(|&l| kept[l])
                        .collect();
                    spans(c, &live)
                })
                .collect();
            (count, flags)
        })
        .collect();
    let (kept_counts, survived) = results.into_iter().unzip();
    Ok(SamplingReport {
        lambda,
        n,
        line_count: c.len(),
        trials,
        seed,
        keep_probability: prob.min(1.0),
        tracked: tracked.into_iter().map(|j| j.point).collect(),
        kept_counts,
        survived,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopePartition {
    pub p: u64,
    pub k: u64,
    /// `ceil(p / k)`, the largest block size.
    pub m: usize,
    /// Consecutive residue blocks `S_1, ..., S_k`.
    pub blocks: Vec<Vec<u64>>,
    pub collection: LineCollection,
    /// Every point of the plane `{x3 = 0}` with the collection lines it chooses.
    pub choices: Vec<(Point, Vec<usize>)>,
    /// Number of choosing points per collection line.
    pub chooser_counts: Vec<usize>,
}

impl SlopePartition {
    /// Slope `b` of a planar line with direction `(1, b, 0)`; `None` for the
    /// lines `{x = c}` and for verticals.
    pub fn slope(&self, line: usize) -> Option<u64> {
        let l = self.collection.line(line);
        let d = l.dir();
        (d[0].is_one() && d[2].is_zero()).then(|| d[1].to_string().parse().expect("residue"))
    }

    pub fn choice_counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.choices.iter().map(|(_, ls)| ls.len())
    }

    /// Largest chooser count over lines of nonzero slope.
    pub fn max_choosers_nonzero_slope(&self) -> usize {
        (0..self.collection.len())
            .filter(|&l| self.slope(l).is_some_and(|b| b != 0))
            .map(|l| self.chooser_counts[l])
            .max()
            .unwrap_or(0)
    }
}

/// Balanced partition of `0..p` into `k` consecutive blocks; the first
/// `p mod k` blocks hold one extra element.
pub fn consecutive_blocks(p: u64, k: u64) -> Vec<Vec<u64>> {
    let (q, r) = (p / k, p % k);
    let mut out = Vec::with_capacity(k as usize);
    let mut start = 0;
    for j in 0..k {
        let len = q + u64::from(j < r);
        out.push((start..start + len).collect());
        start += len;
    }
    out
}

/// Each joint `(x0, y0, 0)` with `y0` in block `S_j` chooses the planar lines
/// `{y - y0 = b (x - x0)}` through it with `b` in `S_j`, except slope 0.
pub fn slope_partition_choice(p: u64, k: u64) -> Result<SlopePartition, AlgorithmError> {
    if k == 0 || k > p {
        return Err(AlgorithmError::InvalidParameter(format!(
            "need 1 <= k <= p, got k = {k}, p = {p}"
        )));
    }
    let collection = plane_with_verticals(p)?;
    let spec = collection.spec();
    let index: HashMap<_, usize> = collection
        .lines()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();
    let blocks = consecutive_blocks(p, k);
    let mut block_of = vec![0usize; p as usize];
    for (j, b) in blocks.iter().enumerate() {
        for &y in b {
            block_of[y as usize] = j;
        }
    }
    let mut choices = Vec::with_capacity((p * p) as usize);
    let mut chooser_counts = vec![0usize; collection.len()];
    for x0 in 0..p {
        for y0 in 0..p {
            let point = Point::new(vec![spec.from_u64(x0), spec.from_u64(y0), spec.zero()])?;
            let mut lines = Vec::new();
            for &b in &blocks[block_of[y0 as usize]] {
                if b == 0 {
                    continue;
                }
                let l = crate::geometry::Line::new(
                    point.clone(),
                    vec![spec.one(), spec.from_u64(b), spec.zero()],
                )?;
                let i = index[&l];
                chooser_counts[i] += 1;
                lines.push(i);
            }
            choices.push((point, lines));
        }
    }
    Ok(SlopePartition {
        p,
        k,
        m: p.div_ceil(k) as usize,
        blocks,
        collection,
        choices,
        chooser_counts,
    })
}

/// Degree reduction for a set of joints `K`: if every line of the
/// collection meets `K` in at least `m` points, the minimal vanishing
/// polynomial of `K` has degree at least `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReduction {
    /// `min_l |l ∩ K|` over the collection.
    pub min_line_count: usize,
    pub minimal: MinimalVanishing,
}

impl DegreeReduction {
    pub fn holds(&self) -> bool {
        self.minimal.degree as usize >= self.min_line_count
    }
}

pub fn degree_reduction(
    c: &LineCollection,
    k: &[Point],
) -> Result<DegreeReduction, AlgorithmError> {
    if k.is_empty() || c.is_empty() {
        return Err(AlgorithmError::Contract("need nonempty K and lines".into()));
    }
    let min_line_count = c
        .lines()
        .iter()
        .map(|l| k.iter().filter(|x| l.contains(x)).count())
        .min()
        .expect("nonempty");
    let minimal = minimal_vanishing_polynomial(k)?;
    Ok(DegreeReduction {
        min_line_count,
        minimal,
    })
}

/// How the gradient of a vanishing polynomial `f` of `K` behaves along the
/// collection. A line meeting `K` in more than `deg f` points restricts `f` to
/// zero, so `<dir, grad f>` vanishes along it; at points of `K` where such
/// "rich" lines span, all of `grad f` vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientChain {
    pub rich_lines: Vec<usize>,
    /// `f|_l == 0` for every rich line.
    pub restrictions_vanish: bool,
    /// `<dir_l, grad f(x)> = 0` for every rich line `l` and `x in l ∩ K`.
    pub directional_derivatives_vanish: bool,
    /// Points of `K` whose rich lines span `F^n`.
    pub spanned_points: Vec<Point>,
    /// `grad f(x) = 0` at every spanned point.
    pub gradient_vanishes_at_spanned: bool,
    /// `grad f(x) = 0` at every point of `K`.
    pub gradient_vanishes_on_k: bool,
    /// Gradient components that vanish on all of `K`.
    pub components_vanishing_on_k: Vec<usize>,
    /// Those components that are not the zero polynomial.
    pub nonzero_components_vanishing_on_k: Vec<usize>,
}

pub fn gradient_chain(
    c: &LineCollection,
    k: &[Point],
    f: &MultivariatePolynomial,
) -> Result<GradientChain, AlgorithmError> {
    let deg = f.degree().unwrap_or(0) as usize;
    let grad = f.gradient();
    let grad_at = |x: &Point| -> Result<Vec<_>, PolynomialError> {
        grad.iter().map(|g| g.evaluate(x.coords())).collect()
    };
    let spec: FieldSpec = c.spec();
    let mut rich_lines = Vec::new();
    let mut restrictions_vanish = true;
    let mut directional = true;
    let mut rich_through: HashMap<&Point, Vec<usize>> = HashMap::new();
    for (i, l) in c.lines().iter().enumerate() {
        let on: Vec<&Point> = k.iter().filter(|x| l.contains(x)).collect();
        if on.len() <= deg {
            continue;
        }
        rich_lines.push(i);
        restrictions_vanish &= f.restrict_to_line(l)?.is_zero();
        for x in on {
            let g = grad_at(x)?;
            let dot = l
                .dir()
                .iter()
                .zip(&g)
                .fold(spec.zero(), |acc, (b, gi)| &acc + &(b * gi));
            directional &= dot.is_zero();
            rich_through.entry(x).or_default().push(i);
        }
    }
    let mut spanned_points = Vec::new();
    let mut at_spanned = true;
    for x in k {
        if rich_through.get(x).is_some_and(|ls| spans(c, ls)) {
            at_spanned &= grad_at(x)?.iter().all(|v| v.is_zero());
            spanned_points.push(x.clone());
        }
    }
    let mut on_k = true;
    let mut components = vec![true; grad.len()];
    for x in k {
        for (i, v) in grad_at(x)?.iter().enumerate() {
            if !v.is_zero() {
                components[i] = false;
                on_k = false;
            }
        }
    }
    let components_vanishing_on_k: Vec<usize> =
        (0..grad.len()).filter(|&i| components[i]).collect();
    let nonzero_components_vanishing_on_k = components_vanishing_on_k
        .iter()
        .copied()
        .filter(|&i| !grad[i].is_zero())
        .collect();
    Ok(GradientChain {
        rich_lines,
        restrictions_vanish,
        directional_derivatives_vanish: directional,
        spanned_points,
        gradient_vanishes_at_spanned: at_spanned,
        gradient_vanishes_on_k: on_k,
        components_vanishing_on_k,
        nonzero_components_vanishing_on_k,
    })
}
