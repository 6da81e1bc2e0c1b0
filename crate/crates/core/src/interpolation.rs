//! Vanishing polynomials by monomial counting.
//!
//! A polynomial of degree `<= d` in `n` variables has `C(d+n, n)`
//! coefficients, and vanishing at a point is one linear condition on them, so
//! once `C(d+n, n)` exceeds the number of points the evaluation system has a
//! nonzero solution. [`degree_bound`] is the smallest such `d`.

use thiserror::Error;

use crate::field::FieldElement;
use crate::geometry::Point;
use crate::linalg::Matrix;
use crate::polynomial::{Exponents, MultivariatePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpolationError {
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("points disagree on field or dimension")]
    Inconsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBound {
    pub n: usize,
    pub m: u64,
    pub dstar: u32,
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of monomials of degree `<= d` in `n` variables.
pub fn monomial_count(n: usize, d: u32) -> u128 {
    binomial(d as u64 + n as u64, n as u64)
}

/// `dstar = min { d >= 0 : C(d+n, n) > m }`.
pub fn degree_bound(n: usize, m: u64) -> DegreeBound {
    assert!(n >= 1, "dimension must be positive");
    let mut d = 0u32;
    while monomial_count(n, d) <= m as u128 {
        d += 1;
    }
    DegreeBound { n, m, dstar: d }
}

/// Shorthand for `degree_bound(n, m).dstar`.
pub fn dstar(n: usize, m: u64) -> u32 {
    degree_bound(n, m).dstar
}

/// Exponent vectors of total degree `<= d`, by increasing degree and, within a
/// degree, lexicographically descending (`x1^k` first).
pub fn graded_lex_monomials(n: usize, d: u32) -> Vec<Exponents> {
    fn of_degree(n: usize, k: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() == n - 1 {
            let used: u32 = prefix.iter().sum();
            let mut e = prefix.clone();
            e.push(k - used);
            out.push(e);
            return;
        }
        let used: u32 = prefix.iter().sum();
        for a in (0..=k - used).rev() {
            prefix.push(a);
            of_degree(n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for k in 0..=d {
        of_degree(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn check_points(points: &[Point]) -> Result<(), InterpolationError> {
    let Some(first) = points.first() else {
        return Ok(());
    };
    if points
        .iter()
        .any(|x| x.spec() != first.spec() || x.dimension() != first.dimension())
    {
        return Err(InterpolationError::Inconsistent);
    }
    Ok(())
}

/// The `|P| x C(d+n, n)` matrix of monomial values, columns in graded-lex order.
pub fn evaluation_matrix(points: &[Point], monomials: &[Exponents]) -> Matrix {
    let spec = points[0].spec();
    let max_deg = monomials
        .iter()
        .flat_map(|e| e.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let mut entries = Vec::with_capacity(points.len() * monomials.len());
    for x in points {
        let powers: Vec<Vec<FieldElement>> = x
            .coords()
            .iter()
            .map(|c| {
                let mut pw = vec![spec.one()];
                for k in 1..=max_deg {
                    let next = &pw[k - 1] * c;
                    pw.push(next);
                }
                pw
            })
            .collect();
        for e in monomials {
            let v = e
                .iter()
                .enumerate()
                .fold(spec.one(), |acc, (i, &a)| &acc * &powers[i][a as usize]);
            entries.push(v);
        }
    }
    Matrix::new(spec, points.len(), monomials.len(), entries).expect("shape")
}

/// A nonzero polynomial of degree `<= d` vanishing on `points`: the first
/// nullspace basis vector of the evaluation matrix. `None` if only the zero
/// polynomial vanishes there.
pub fn vanishing_polynomial(
    points: &[Point],
    d: u32,
) -> Result<Option<MultivariatePolynomial>, InterpolationError> {
    check_points(points)?;
    let Some(first) = points.first() else {
        return Err(InterpolationError::EmptyPointSet);
    };
    let (spec, n) = (first.spec(), first.dimension());
    let monomials = graded_lex_monomials(n, d);
    let m = evaluation_matrix(points, &monomials);
    let Some(v) = m.nullspace_basis().into_iter().next() else {
        return Ok(None);
    };
    let poly = MultivariatePolynomial::from_terms(spec, n, monomials.into_iter().zip(v))
        .expect("consistent arity");
    Ok(Some(poly))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalVanishing {
    pub degree: u32,
    pub polynomial: MultivariatePolynomial,
}

/// The smallest `d` admitting a nonzero vanishing polynomial, searching
/// `d = 0, 1, 2, ...`; the failed search at `d - 1` certifies minimality.
pub fn minimal_vanishing_polynomial(
    points: &[Point],
) -> Result<MinimalVanishing, InterpolationError> {
    if points.is_empty() {
        return Err(InterpolationError::EmptyPointSet);
    }
    let bound = dstar(points[0].dimension(), points.len() as u64);
    for d in 0..=bound {
        if let Some(polynomial) = vanishing_polynomial(points, d)? {
            return Ok(MinimalVanishing {
                degree: polynomial.degree().expect("nonzero"),
                polynomial,
            });
        }
    }
    unreachable!("a vanishing polynomial of degree dstar always exists")
}
