//! Named line configurations and seeded random families.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::geometry::{is_generic, GeometryError, Line, LineCollection, Point};
use crate::linalg::rank_of;
use crate::polynomial::MultivariatePolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("gave up after {attempts} attempts: {what}")]
    CapExceeded { what: String, attempts: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Magnitude of random integer coordinates used over `Q`.
const RATIONAL_RANGE: i64 = 50;
const ATTEMPTS_PER_LINE: usize = 10_000;

fn random_element(spec: FieldSpec, rng: &mut ChaCha8Rng) -> FieldElement {
    match spec.order() {
        Some(p) => spec.from_u64(rng.gen_range(0..p)),
        None => spec.from_i64(rng.gen_range(-RATIONAL_RANGE..=RATIONAL_RANGE)),
    }
}

fn random_vector(spec: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    (0..n).map(|_| random_element(spec, rng)).collect()
}

fn unit(spec: FieldSpec, n: usize, j: usize) -> Vec<FieldElement> {
    let mut v = vec![spec.zero(); n];
    v[j] = spec.one();
    v
}

fn check_dimension(n: usize) -> Result<(), GenerationError> {
    if n < 3 {
        return Err(GeometryError::Dimension(n).into());
    }
    Ok(())
}

/// The grid: for each `j`, the `M^(n-1)` lines parallel to `e_j` through
/// `(k_1, ..., k_{j-1}, 0, k_{j+1}, ..., k_n)` with every `k_i in {1..M}`.
/// Its joints are exactly `{1..M}^n`.
pub fn grid(n: usize, m: u64, spec: FieldSpec) -> Result<LineCollection, GenerationError> {
    check_dimension(n)?;
    if m == 0 {
        return Err(GenerationError::Range("grid needs M >= 1".into()));
    }
    if let Some(p) = spec.order() {
        if m >= p {
            return Err(GenerationError::Range(format!(
                "grid M = {m} does not embed in F_{p} (need M < p)"
            )));
        }
    }
    let count = (m as u128).pow(n as u32 - 1);
    if count > 10_000_000 {
        return Err(GenerationError::Range(format!(
            "grid with M = {m}, n = {n} is too large"
        )));
    }
    let mut lines = Vec::with_capacity(n * count as usize);
    for j in 0..n {
        for idx in 0..count as u64 {
            let mut rest = idx;
            let mut coords = Vec::with_capacity(n);
            for i in 0..n {
                if i == j {
                    coords.push(spec.zero());
                } else {
                    coords.push(spec.from_u64(rest % m + 1));
                    rest /= m;
                }
            }
            lines.push(Line::new(Point::new(coords)?, unit(spec, n, j))?);
        }
    }
    Ok(LineCollection::new(spec, n, lines)?)
}

/// True when `d` together with every `(n-1)`-subset of `dirs` spans `F^n`.
fn in_general_position(
    spec: FieldSpec,
    dirs: &[Vec<FieldElement>],
    d: &[FieldElement],
    n: usize,
) -> bool {
    fn go(
        spec: FieldSpec,
        dirs: &[Vec<FieldElement>],
        start: usize,
        chosen: &mut Vec<usize>,
        d: &[FieldElement],
        n: usize,
    ) -> bool {
        if chosen.len() == n - 1 {
            let mut vs: Vec<&[FieldElement]> = chosen.iter().map(|&i| dirs[i].as_slice()).collect();
            vs.push(d);
            return rank_of(spec, &vs) == n;
        }
        for i in start..dirs.len() {
            if dirs.len() - i < n - 1 - chosen.len() {
                break;
            }
            chosen.push(i);
            let ok = go(spec, dirs, i + 1, chosen, d, n);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if dirs.len() < n - 1 {
        // fewer than n lines: only pairwise distinctness matters, and any
        // subset of at most n-1 vectors must stay independent
        let mut vs: Vec<&[FieldElement]> = dirs.iter().map(Vec::as_slice).collect();
        vs.push(d);
        return rank_of(spec, &vs) == vs.len();
    }
    go(spec, dirs, 0, &mut Vec::with_capacity(n), d, n)
}

fn monic(v: Vec<FieldElement>) -> Option<Vec<FieldElement>> {
    let pivot = v.iter().position(|e| !e.is_zero())?;
    let inv = v[pivot].inv().expect("nonzero");
    Some(v.iter().map(|e| e * &inv).collect())
}

/// `count` directions with every `n`-subset spanning, starting from the
/// standard basis. Rejection-sampled; fails after a bounded number of draws.
fn general_position_directions(
    spec: FieldSpec,
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<FieldElement>>, GenerationError> {
    let mut dirs: Vec<Vec<FieldElement>> = (0..count.min(n)).map(|j| unit(spec, n, j)).collect();
    let cap = ATTEMPTS_PER_LINE * count.max(1);
    let mut attempts = 0;
    while dirs.len() < count {
        attempts += 1;
        if attempts > cap {
            return Err(GenerationError::CapExceeded {
                what: format!("{count} directions in general position over {spec}"),
                attempts: cap,
            });
        }
        let Some(d) = monic(random_vector(spec, n, rng)) else {
            continue;
        };
        if !dirs.contains(&d) && in_general_position(spec, &dirs, &d, n) {
            dirs.push(d);
        }
    }
    Ok(dirs)
}

/// `L` lines through the origin whose directions are in general position,
/// so every `n` of them form a joint at 0 and the collection is generic.
pub fn generic_star(
    n: usize,
    l: usize,
    spec: FieldSpec,
    seed: u64,
) -> Result<LineCollection, GenerationError> {
    check_dimension(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let origin = Point::origin(spec, n)?;
    let dirs = general_position_directions(spec, n, l, &mut rng)?;
    let lines = dirs
        .into_iter()
        .map(|d| Line::new(origin.clone(), d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LineCollection::new(spec, n, lines)?)
}

/// Several generic stars at random centers, resampled until the union is generic.
pub fn generic_multi_star(
    n: usize,
    centers: usize,
    lines_per_center: usize,
    spec: FieldSpec,
    seed: u64,
) -> Result<LineCollection, GenerationError> {
    check_dimension(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const TRIES: usize = 100;
    for _ in 0..TRIES {
        let mut seen = HashSet::new();
        let mut lines = Vec::new();
        while seen.len() < centers {
            let c = Point::new(random_vector(spec, n, &mut rng))?;
            if !seen.insert(c.clone()) {
                continue;
            }
            for d in general_position_directions(spec, n, lines_per_center, &mut rng)? {
                lines.push(Line::new(c.clone(), d)?);
            }
        }
        let c = LineCollection::new(spec, n, lines)?;
        if c.merged_duplicates() == 0 && is_generic(&c)?.generic {
            return Ok(c);
        }
    }
    Err(GenerationError::CapExceeded {
        what: "generic union of stars".into(),
        attempts: TRIES,
    })
}

/// All `p^2 + p` lines of the plane `{x3 = 0}` in `F_p^3`, followed by the
/// `p^2` vertical lines through the points of that plane.
pub fn plane_with_verticals(p: u64) -> Result<LineCollection, GenerationError> {
    let spec = FieldSpec::prime(p).map_err(|e| GenerationError::Range(e.to_string()))?;
    let el = |v: u64| spec.from_u64(v);
    let mut lines = Vec::with_capacity((2 * p * p + p) as usize);
    // slope-b lines {y = c + b x}: direction (1, b, 0) through (0, c, 0)
    for b in 0..p {
        for c in 0..p {
            let base = Point::new(vec![el(0), el(c), el(0)])?;
            lines.push(Line::new(base, vec![el(1), el(b), el(0)])?);
        }
    }
    // lines {x = c} inside the plane
    for c in 0..p {
        let base = Point::new(vec![el(c), el(0), el(0)])?;
        lines.push(Line::new(base, vec![el(0), el(1), el(0)])?);
    }
    for a in 0..p {
        for b in 0..p {
            let base = Point::new(vec![el(a), el(b), el(0)])?;
            lines.push(Line::new(base, vec![el(0), el(0), el(1)])?);
        }
    }
    Ok(LineCollection::new(spec, 3, lines)?)
}

/// The `x3`-axis (index 0) followed by `M` lines through 0 with distinct
/// directions in the plane `{x3 = 0}`: `e1`, `e2`, then `(1, b, 0)` for
/// `b = 1, 2, ...`.
pub fn axis_with_planar_pencil(m: u64, spec: FieldSpec) -> Result<LineCollection, GenerationError> {
    if let Some(p) = spec.order() {
        if m > p + 1 {
            return Err(GenerationError::Range(format!(
                "only {} planar directions exist over F_{p}, asked for {m}",
                p + 1
            )));
        }
    }
    let origin = Point::origin(spec, 3)?;
    let mut lines = vec![Line::new(origin.clone(), unit(spec, 3, 2))?];
    for k in 0..m {
        let dir = match k {
            0 => unit(spec, 3, 0),
            1 => unit(spec, 3, 1),
            b => vec![spec.one(), spec.from_u64(b - 1), spec.zero()],
        };
        lines.push(Line::new(origin.clone(), dir)?);
    }
    Ok(LineCollection::new(spec, 3, lines)?)
}

fn line_count_in_space(p: u64, n: usize) -> u128 {
    // p^(n-1) (p^n - 1) / (p - 1), saturating
    let pn = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let pn1 = (p as u128).checked_pow(n as u32 - 1).unwrap_or(u128::MAX);
    pn1.saturating_mul((pn - 1) / (p as u128 - 1))
}

/// `L` distinct lines with uniformly random base points and directions.
pub fn random_lines(
    n: usize,
    l: usize,
    spec: FieldSpec,
    seed: u64,
) -> Result<LineCollection, GenerationError> {
    check_dimension(n)?;
    if let Some(p) = spec.order() {
        if (l as u128) > line_count_in_space(p, n) {
            return Err(GenerationError::Range(format!(
                "F_{p}^{n} has fewer than {l} lines"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(l);
    let mut lines = Vec::with_capacity(l);
    let cap = ATTEMPTS_PER_LINE * l.max(1);
    let mut attempts = 0;
    while lines.len() < l {
        attempts += 1;
        if attempts > cap {
            return Err(GenerationError::CapExceeded {
                what: format!("{l} distinct random lines"),
                attempts: cap,
            });
        }
        let dir = random_vector(spec, n, &mut rng);
        if dir.iter().all(FieldElement::is_zero) {
            continue;
        }
        let base = Point::new(random_vector(spec, n, &mut rng))?;
        let line = Line::new(base, dir)?;
        if seen.insert(line.clone()) {
            lines.push(line);
        }
    }
    Ok(LineCollection::new(spec, n, lines)?)
}

/// A random polynomial with at most `terms` monomials, each exponent in
/// `0..=max_exp`; coefficients uniform over `F_p`, small integers over `Q`.
pub fn random_polynomial(
    spec: FieldSpec,
    nvars: usize,
    terms: usize,
    max_exp: u32,
    rng: &mut impl Rng,
) -> MultivariatePolynomial {
    let pairs: Vec<_> = (0..terms)
        .map(|_| {
            let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect();
            let c = match spec.order() {
                Some(p) => spec.from_u64(rng.gen_range(0..p)),
                None => spec.from_i64(rng.gen_range(-9..=9)),
            };
            (e, c)
        })
        .collect();
    MultivariatePolynomial::from_terms(spec, nvars, pairs).expect("arity matches")
}

/// A named configuration and its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Grid {
        n: usize,
        m: u64,
    },
    Star {
        n: usize,
        lines: usize,
        seed: u64,
    },
    MultiStar {
        n: usize,
        centers: usize,
        per_center: usize,
        seed: u64,
    },
    PlaneWithVerticals {
        p: u64,
    },
    AxisWithPencil {
        m: u64,
    },
    Random {
        n: usize,
        lines: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSpec {
    pub family: Family,
    pub field: FieldSpec,
}

impl ConfigSpec {
    pub fn generate(&self) -> Result<LineCollection, GenerationError> {
        match self.family {
            Family::Grid { n, m } => grid(n, m, self.field),
            Family::Star { n, lines, seed } => generic_star(n, lines, self.field, seed),
            Family::MultiStar {
                n,
                centers,
                per_center,
                seed,
            } => generic_multi_star(n, centers, per_center, self.field, seed),
            Family::PlaneWithVerticals { p } => {
                if self.field.characteristic() != p {
                    return Err(GenerationError::Range(format!(
                        "plane-with-verticals lives over F_{p}, not {}",
                        self.field
                    )));
                }
                plane_with_verticals(p)
            }
            Family::AxisWithPencil { m } => axis_with_planar_pencil(m, self.field),
            Family::Random { n, lines, seed } => random_lines(n, lines, self.field, seed),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Grid { n, m } => write!(f, "grid(n={n}, M={m})"),
            Family::Star { n, lines, seed } => write!(f, "star(n={n}, L={lines}, seed={seed})"),
            Family::MultiStar {
                n,
                centers,
                per_center,
                seed,
            } => write!(
                f,
                "multistar(n={n}, centers={centers}, per_center={per_center}, seed={seed})"
            ),
            Family::PlaneWithVerticals { p } => write!(f, "plane-with-verticals(p={p})"),
            Family::AxisWithPencil { m } => write!(f, "axis-with-pencil(M={m})"),
            Family::Random { n, lines, seed } => write!(f, "random(n={n}, L={lines}, seed={seed})"),
        }
    }
}
