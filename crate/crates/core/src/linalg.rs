//! Dense exact linear algebra: rank, right nullspace and particular solutions
//! by Gaussian elimination with first-nonzero pivoting.

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("entry field {got} differs from matrix field {expected}")]
    FieldMismatch { expected: FieldSpec, got: FieldSpec },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Reduced row echelon form together with its pivot columns.
struct Echelon {
    m: Matrix,
    pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|e| e.spec() != spec) {
            return Err(LinalgError::FieldMismatch {
                expected: spec,
                got: bad.spec(),
            });
        }
        Ok(Matrix {
            spec,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            spec,
            rows,
            cols,
            entries: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.entries[i * n + i] = spec.one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(spec: FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Shape {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Self::new(spec, rows.len(), cols, entries)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(spec: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<FieldElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| spec.from_i64(v)).collect())
            .collect();
        Self::from_rows(spec, &rows).expect("rectangular input")
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            spec: self.spec,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(self.spec.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(found) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, found);
            let inv = m.get(pr, c).inv().expect("pivot is nonzero");
            for cc in c..m.cols {
                let i = pr * m.cols + cc;
                m.entries[i] = &m.entries[i] * &inv;
            }
            for r in 0..m.rows {
                if r == pr || m.get(r, c).is_zero() {
                    continue;
                }
                let factor = m.get(r, c).clone();
                for cc in c..m.cols {
                    let sub = &factor * m.get(pr, cc);
                    let i = r * m.cols + cc;
                    m.entries[i] = &m.entries[i] - &sub;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Echelon { m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{v : self * v = 0}`. One vector per free column, in increasing
    /// column order, with that free variable set to 1 and the others to 0.
    pub fn nullspace_basis(&self) -> Vec<Vec<FieldElement>> {
        let Echelon { m, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.spec.zero(); self.cols];
                v[free] = self.spec.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, free);
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = rhs` with every free variable 0, or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, rhs: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(rhs.len(), self.rows, "rhs length must equal row count");
        let mut aug = Vec::with_capacity(self.rows * (self.cols + 1));
        for (r, b) in rhs.iter().enumerate() {
            aug.extend(self.row(r).iter().cloned());
            aug.push(b.clone());
        }
        let aug = Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols + 1,
            entries: aug,
        };
        let Echelon { m, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.spec.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Rank of a list of vectors (as rows).
pub fn rank_of(spec: FieldSpec, vectors: &[&[FieldElement]]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols = vectors[0].len();
    let entries = vectors.iter().flat_map(|v| v.iter().cloned()).collect();
    Matrix {
        spec,
        rows: vectors.len(),
        cols,
        entries,
    }
    .rank()
}

/// Incrementally maintained row-echelon basis, for rank-pruned subset search.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    spec: FieldSpec,
    // (pivot column, reduced row with 1 at the pivot)
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl EchelonBasis {
    pub fn new(spec: FieldSpec) -> Self {
        EchelonBasis {
            spec,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the extended basis if `v` is
    /// independent of it.
    pub fn extended(&self, v: &[FieldElement]) -> Option<EchelonBasis> {
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            if !w[*pc].is_zero() {
                let f = w[*pc].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi = &*wi - &(&f * ri);
                }
            }
        }
        let pc = w.iter().position(|e| !e.is_zero())?;
        let inv = w[pc].inv().expect("nonzero");
        for wi in w.iter_mut() {
            *wi = &*wi * &inv;
        }
        let mut next = self.clone();
        next.rows.push((pc, w));
        Some(next)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(f(5), 3).rank(), 3);
        assert_eq!(Matrix::from_i64(f(5), &[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(Matrix::from_i64(f(2), &[&[1, 1], &[1, 2]]).rank(), 2);
        assert_eq!(Matrix::from_i64(f(2), &[&[1, 1], &[1, 1]]).rank(), 1);
        // over Q the same integer matrix [[1,1],[1,3]] is invertible, over F_2 not
        assert_eq!(Matrix::from_i64(f(2), &[&[1, 1], &[1, 3]]).rank(), 1);
        assert_eq!(
            Matrix::from_i64(FieldSpec::rationals(), &[&[1, 1], &[1, 3]]).rank(),
            2
        );
    }

    #[test]
    fn nullspace_examples() {
        let ns = Matrix::from_i64(f(2), &[&[1, 1]]).nullspace_basis();
        assert_eq!(ns, vec![vec![f(2).one(), f(2).one()]]);
        assert!(Matrix::identity(f(7), 4).nullspace_basis().is_empty());
        let z = Matrix::zeros(f(7), 2, 3).nullspace_basis();
        assert_eq!(z.len(), 3);
        assert_eq!(z[0], vec![f(7).one(), f(7).zero(), f(7).zero()]);
    }

    #[test]
    fn solve_examples() {
        let f7 = f(7);
        let x = Matrix::identity(f7, 2).solve(&[f7.from_i64(4), f7.from_i64(2)]);
        assert_eq!(x, Some(vec![f7.from_i64(4), f7.from_i64(2)]));
        let m = Matrix::from_i64(f7, &[&[1, 0], &[1, 0]]);
        assert_eq!(m.solve(&[f7.one(), f7.from_i64(2)]), None);
        let f5 = f(5);
        let x = Matrix::from_i64(f5, &[&[2]]).solve(&[f5.one()]).unwrap();
        assert_eq!(x, vec![f5.from_i64(3)]);
    }

    #[test]
    fn constructor_validates() {
        let f5 = f(5);
        assert!(matches!(
            Matrix::new(f5, 2, 2, vec![f5.one()]),
            Err(LinalgError::Shape { .. })
        ));
        assert!(matches!(
            Matrix::new(f5, 1, 1, vec![f(7).one()]),
            Err(LinalgError::FieldMismatch { .. })
        ));
    }

    #[test]
    fn echelon_basis_tracks_rank() {
        let f3 = f(3);
        let v = |a: &[i64]| a.iter().map(|&x| f3.from_i64(x)).collect::<Vec<_>>();
        let b = EchelonBasis::new(f3);
        let b = b.extended(&v(&[1, 1, 0])).unwrap();
        let b = b.extended(&v(&[0, 1, 1])).unwrap();
        assert!(b.extended(&v(&[1, 2, 1])).is_none());
        assert_eq!(b.extended(&v(&[0, 0, 1])).unwrap().rank(), 3);
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix> {
        (
            prop::sample::select(vec![0u64, 2, 3, 5, 7]),
            1usize..6,
            1usize..7,
        )
            .prop_flat_map(|(p, r, c)| {
                prop::collection::vec(-3i64..4, r * c).prop_map(move |vals| {
                    let spec = FieldSpec::new(p).unwrap();
                    let entries = vals.iter().map(|&v| spec.from_i64(v)).collect();
                    Matrix::new(spec, r, c, entries).unwrap()
                })
            })
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_kernel(m in matrix_strategy()) {
            let basis = m.nullspace_basis();
            prop_assert_eq!(basis.len(), m.cols() - m.rank());
            for v in &basis {
                prop_assert!(m.mul_vec(v).iter().all(FieldElement::is_zero));
            }
        }

        #[test]
        fn rank_is_transpose_invariant(m in matrix_strategy()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn solutions_satisfy_system(m in matrix_strategy(), seed in prop::collection::vec(-3i64..4, 7)) {
            // rhs in the column space is always consistent
            let spec = m.spec();
            let x0: Vec<_> = seed[..m.cols()].iter().map(|&v| spec.from_i64(v)).collect();
            let rhs = m.mul_vec(&x0);
            let x = m.solve(&rhs).expect("consistent");
            prop_assert_eq!(m.mul_vec(&x), rhs);
        }
    }
}
