//! Sparse multivariate polynomials with first-order Hasse derivatives.
//!
//! The `i`-th Hasse derivative of `f` is the coefficient of `z_i` in
//! `f(x + z)`. On a monomial `c x^a` it is `(a_i . c) x^(a - e_i)`, where
//! `a_i . c` is the `a_i`-fold sum of `c` in the field, so in characteristic
//! `p` it vanishes whenever `p | a_i`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::geometry::Line;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolynomialError {
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("exponent {exponent} of x{var} is not a multiple of the characteristic {p}")]
    NotPthPower { var: usize, exponent: u32, p: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector `(a_1, ..., a_n)`.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    spec: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl MultivariatePolynomial {
    pub fn zero(spec: FieldSpec, nvars: usize) -> Self {
        MultivariatePolynomial {
            spec,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: FieldSpec, nvars: usize, c: FieldElement) -> Self {
        Self::from_terms(spec, nvars, [(vec![0; nvars], c)]).expect("well-formed constant")
    }

    /// The variable `x_i` (0-based).
    pub fn var(spec: FieldSpec, nvars: usize, i: usize) -> Result<Self, PolynomialError> {
        if i >= nvars {
            return Err(PolynomialError::VariableIndex { index: i, nvars });
        }
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(spec, nvars, [(e, spec.one())])
    }

    /// Sums like terms and drops zero coefficients.
    pub fn from_terms(
        spec: FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, FieldElement)>,
    ) -> Result<Self, PolynomialError> {
        let mut p = Self::zero(spec, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolynomialError::Arity {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if c.spec() != spec {
                return Err(FieldError::Mismatch(spec, c.spec()).into());
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.spec, other.spec, "field mismatch");
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultivariatePolynomial {
            spec: self.spec,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        let mut out = Self::zero(self.spec, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.spec, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `f^k` by repeated squaring; `f^0 = 1`.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = Self::constant(self.spec, self.nvars, self.spec.one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn evaluate(&self, x: &[FieldElement]) -> Result<FieldElement, PolynomialError> {
        if x.len() != self.nvars {
            return Err(PolynomialError::Arity {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = self.spec.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ai) in x.iter().zip(e) {
                if ai > 0 {
                    t = &t * &xi.pow(ai as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// First-order Hasse derivative in `x_i` (0-based).
    pub fn hasse_partial(&self, i: usize) -> Result<Self, PolynomialError> {
        if i >= self.nvars {
            return Err(PolynomialError::VariableIndex {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.spec, self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.times(e[i] as u64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.hasse_partial(i).expect("index in range"))
            .collect()
    }

    /// `f(v + t b)` as a polynomial in `t`.
    pub fn restrict_to_line(&self, l: &Line) -> Result<UnivariatePolynomial, PolynomialError> {
        self.restrict(l.base().coords(), l.dir())
    }

    /// `f(v + t b)` for an arbitrary (not necessarily canonical) parametrization.
    pub fn restrict(
        &self,
        v: &[FieldElement],
        b: &[FieldElement],
    ) -> Result<UnivariatePolynomial, PolynomialError> {
        if v.len() != self.nvars || b.len() != self.nvars {
            return Err(PolynomialError::Arity {
                expected: self.nvars,
                got: v.len().min(b.len()),
            });
        }
        let spec = self.spec;
        // powers[i][a] = (v_i + t b_i)^a
        let max_exp: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<UnivariatePolynomial>> = (0..self.nvars)
            .map(|i| {
                let lin = UnivariatePolynomial::new(spec, vec![v[i].clone(), b[i].clone()]);
                let mut out = vec![UnivariatePolynomial::constant(spec, spec.one())];
                for a in 1..=max_exp[i] as usize {
                    let next = out[a - 1].mul(&lin);
                    out.push(next);
                }
                out
            })
            .collect();
        let mut acc = UnivariatePolynomial::zero(spec);
        for (e, c) in &self.terms {
            let mut t = UnivariatePolynomial::constant(spec, c.clone());
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    t = t.mul(&powers[i][a as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// `g` with `g^p = self`, where every exponent is divisible by the
    /// characteristic `p`: divide exponents by `p`, take p-th roots of
    /// coefficients.
    pub fn pth_root(&self) -> Result<Self, PolynomialError> {
        let p = self.spec.characteristic();
        if p == 0 {
            return Err(FieldError::Unsupported("p-th root").into());
        }
        let mut out = Self::zero(self.spec, self.nvars);
        for (e, c) in &self.terms {
            let mut g = Vec::with_capacity(e.len());
            for (var, &a) in e.iter().enumerate() {
                if !(a as u64).is_multiple_of(p) {
                    return Err(PolynomialError::NotPthPower {
                        var,
                        exponent: a,
                        p,
                    });
                }
                g.push((a as u64 / p) as u32);
            }
            out.add_term(g, c.pth_root()?);
        }
        Ok(out)
    }

    /// True when every exponent of every term is a multiple of the characteristic
    /// (for `Q`: when the polynomial is constant).
    pub fn exponents_divisible_by_char(&self) -> bool {
        let p = self.spec.characteristic();
        self.terms.keys().all(|e| {
            e.iter()
                .all(|&a| if p == 0 { a == 0 } else { (a as u64).is_multiple_of(p) })
        })
    }
}

impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{a}", i + 1)
                    }
                })
                .collect();
            match (c.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{c}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Polynomial in one variable `t`; `coeffs[k]` is the coefficient of `t^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UnivariatePolynomial {
    pub fn new(spec: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UnivariatePolynomial { spec, coeffs }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Self::new(spec, Vec::new())
    }

    pub fn constant(spec: FieldSpec, c: FieldElement) -> Self {
        Self::new(spec, vec![c])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.spec.zero();
        let c = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                a + b
            })
            .collect();
        Self::new(self.spec, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.spec);
        }
        let mut c = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Self::new(self.spec, c)
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a.times(k as u64))
            .collect();
        Self::new(self.spec, c)
    }

    pub fn evaluate(&self, t: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.spec.zero(), |acc, c| &(&acc * t) + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn poly(spec: FieldSpec, n: usize, terms: &[(&[u32], i64)]) -> MultivariatePolynomial {
        MultivariatePolynomial::from_terms(
            spec,
            n,
            terms.iter().map(|(e, c)| (e.to_vec(), spec.from_i64(*c))),
        )
        .unwrap()
    }

    fn uni(spec: FieldSpec, c: &[i64]) -> UnivariatePolynomial {
        UnivariatePolynomial::new(spec, c.iter().map(|&v| spec.from_i64(v)).collect())
    }

    #[test]
    fn evaluate_examples() {
        let f7 = f(7);
        let g = poly(f7, 3, &[(&[1, 1, 0], 1), (&[0, 0, 1], 1)]);
        let x = Point::from_i64(f7, &[1, 2, 3]).unwrap();
        assert_eq!(g.evaluate(x.coords()).unwrap(), f7.from_i64(5));
        let z = MultivariatePolynomial::zero(f7, 3);
        assert!(z.evaluate(x.coords()).unwrap().is_zero());
        assert!(matches!(
            g.evaluate(&x.coords()[..2]),
            Err(PolynomialError::Arity { .. })
        ));
    }

    #[test]
    fn field_polynomial_vanishes_everywhere() {
        let f5 = f(5);
        let g = poly(f5, 1, &[(&[5], 1), (&[1], -1)]);
        assert!(!g.is_zero());
        for a in f5.elements().unwrap() {
            assert!(g.evaluate(&[a]).unwrap().is_zero());
        }
    }

    #[test]
    fn hasse_examples() {
        let f5 = f(5);
        assert!(poly(f5, 1, &[(&[5], 1)])
            .hasse_partial(0)
            .unwrap()
            .is_zero());
        let q = FieldSpec::rationals();
        assert_eq!(
            poly(q, 2, &[(&[2, 1], 1)]).hasse_partial(0).unwrap(),
            poly(q, 2, &[(&[1, 1], 2)])
        );
        let f3 = f(3);
        assert!(poly(f3, 1, &[(&[3], 1)])
            .hasse_partial(0)
            .unwrap()
            .is_zero());
        assert_eq!(
            poly(f3, 1, &[(&[2], 1)]).hasse_partial(0).unwrap(),
            poly(f3, 1, &[(&[1], 2)])
        );
        assert!(matches!(
            poly(f3, 1, &[(&[2], 1)]).hasse_partial(1),
            Err(PolynomialError::VariableIndex { index: 1, nvars: 1 })
        ));
    }

    #[test]
    fn gradient_examples() {
        let f7 = f(7);
        let c = poly(f7, 3, &[(&[0, 0, 0], 4)]);
        assert!(c.gradient().iter().all(MultivariatePolynomial::is_zero));
        let g = poly(f7, 2, &[(&[1, 1], 1)]);
        let grad = g.gradient();
        assert_eq!(grad[0], MultivariatePolynomial::var(f7, 2, 1).unwrap());
        assert_eq!(grad[1], MultivariatePolynomial::var(f7, 2, 0).unwrap());
        let f5 = f(5);
        let frob = poly(f5, 2, &[(&[5, 0], 1), (&[0, 5], 1)]);
        assert!(frob.gradient().iter().all(MultivariatePolynomial::is_zero));
    }

    #[test]
    fn restriction_examples() {
        let f5 = f(5);
        let line = |b: &[i64], d: &[i64]| {
            Line::new(
                Point::from_i64(f5, b).unwrap(),
                d.iter().map(|&x| f5.from_i64(x)).collect(),
            )
            .unwrap()
        };
        let x3 = poly(f5, 3, &[(&[0, 0, 1], 1)]);
        assert!(x3
            .restrict_to_line(&line(&[0, 0, 0], &[1, 0, 0]))
            .unwrap()
            .is_zero());
        let x1x2 = poly(f5, 3, &[(&[1, 1, 0], 1)]);
        assert_eq!(
            x1x2.restrict_to_line(&line(&[0, 0, 0], &[1, 1, 0]))
                .unwrap(),
            uni(f5, &[0, 0, 1])
        );
        let g = poly(f5, 3, &[(&[2, 0, 0], 1), (&[0, 1, 0], 1)]);
        assert_eq!(
            g.restrict_to_line(&line(&[0, 1, 0], &[1, 0, 0])).unwrap(),
            uni(f5, &[1, 0, 1])
        );
    }

    #[test]
    fn pth_root_examples() {
        let f2 = f(2);
        let g = poly(f2, 2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let r = g.pth_root().unwrap();
        assert_eq!(r, poly(f2, 2, &[(&[1, 0], 1), (&[0, 1], 1)]));
        assert_eq!(r.pow(2), g);
        assert!(MultivariatePolynomial::zero(f2, 2)
            .pth_root()
            .unwrap()
            .is_zero());
        let f5 = f(5);
        assert_eq!(
            poly(f5, 1, &[(&[5], 3)]).pth_root().unwrap(),
            poly(f5, 1, &[(&[1], 3)])
        );
        assert!(matches!(
            poly(f5, 2, &[(&[5, 1], 1)]).pth_root(),
            Err(PolynomialError::NotPthPower {
                var: 1,
                exponent: 1,
                p: 5
            })
        ));
        assert!(matches!(
            poly(FieldSpec::rationals(), 1, &[(&[1], 1)]).pth_root(),
            Err(PolynomialError::Field(FieldError::Unsupported(_)))
        ));
    }

    #[test]
    fn pow_examples() {
        let f2 = f(2);
        let s = poly(f2, 2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(s.pow(2), poly(f2, 2, &[(&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(s.pow(1), s);
        let q = FieldSpec::rationals();
        let x1p1 = poly(q, 1, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(
            x1p1.pow(3),
            poly(q, 1, &[(&[3], 1), (&[2], 3), (&[1], 3), (&[0], 1)])
        );
    }

    #[test]
    fn degree_and_zero() {
        let f7 = f(7);
        assert_eq!(MultivariatePolynomial::zero(f7, 3).degree(), None);
        assert_eq!(
            poly(f7, 3, &[(&[1, 2, 0], 1), (&[0, 0, 1], 3)]).degree(),
            Some(3)
        );
        // like terms cancel on construction
        assert!(poly(f7, 1, &[(&[1], 3), (&[1], 4)]).is_zero());
    }

    #[test]
    fn univariate_derivative() {
        let f3 = f(3);
        // d/dt (t^3 + 2t^2 + t) = 3t^2 + 4t + 1 = t + 1 in F_3
        assert_eq!(uni(f3, &[0, 1, 2, 1]).derivative(), uni(f3, &[1, 1]));
        assert!(uni(f3, &[0, 1, 2, 1]).evaluate(&f3.from_i64(2)).is_zero());
    }
}
