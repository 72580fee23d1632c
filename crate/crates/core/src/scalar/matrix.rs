//! Dense matrices over the scalar fraction field.
//!
//! Gaussian elimination picks, in each column, the nonzero pivot of lowest
//! total degree, breaking ties by row index. Rank statements are generic:
//! they hold off the zero loci of the recorded pivots.

use std::sync::Arc;

use super::field::{Ring, ScalarField};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    data: Vec<ScalarField>,
}

/// Outcome of row reduction.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    /// Pivot columns, in order.
    pub pivot_cols: Vec<usize>,
    /// Pivot values before normalization; where one vanishes the rank drops.
    pub pivots: Vec<ScalarField>,
    /// Reduced row echelon form.
    pub reduced: Matrix,
}

impl Matrix {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ScalarField::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ScalarField::one(ring));
        }
        m
    }

    pub fn from_fn(
        ring: &Arc<Ring>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> ScalarField,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarField {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ScalarField) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &ScalarField)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| ((k / cols, k % cols), v))
    }

    pub fn column(&self, j: usize) -> Vec<ScalarField> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shape"
        );
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shape"
        );
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, s: &ScalarField) -> Matrix {
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        Matrix::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = ScalarField::zero(&self.ring);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, j);
                if b.is_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[ScalarField]) -> Vec<ScalarField> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = ScalarField::zero(&self.ring);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if a.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * x);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ScalarField::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<((usize, usize), &ScalarField)> {
        self.entries().find(|(_, v)| !v.is_zero())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.ring, rows, cols, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    /// Assembles `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &Matrix, tr: &Matrix, bl: &Matrix, br: &Matrix) -> Matrix {
        assert_eq!(tl.rows, tr.rows);
        assert_eq!(bl.rows, br.rows);
        assert_eq!(tl.cols, bl.cols);
        assert_eq!(tr.cols, br.cols);
        let rows = tl.rows + bl.rows;
        let cols = tl.cols + tr.cols;
        Matrix::from_fn(&tl.ring, rows, cols, |i, j| {
            match (i < tl.rows, j < tl.cols) {
                (true, true) => tl.get(i, j).clone(),
                (true, false) => tr.get(i, j - tl.cols).clone(),
                (false, true) => bl.get(i - tl.rows, j).clone(),
                (false, false) => br.get(i - tl.rows, j - tl.cols).clone(),
            }
        })
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Row reduction to reduced echelon form. Only the first `upto` columns
    /// are used for pivots.
    pub fn echelon_upto(&self, upto: usize) -> Echelon {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..upto.min(self.cols) {
            if row == m.rows {
                break;
            }
            let best = (row..m.rows)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| (m.get(r, col).total_degree(), r));
            let Some(p) = best else { continue };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let pv = m.get(row, col).clone();
            let inv = pv.inv().expect("nonzero pivot");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let pj = m.get(row, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(r, j) - &(&factor * pj);
                    m.set(r, j, v);
                }
            }
            pivot_cols.push(col);
            pivots.push(pv);
            row += 1;
        }
        Echelon {
            rank: row,
            pivot_cols,
            pivots,
            reduced: m,
        }
    }

    pub fn echelon(&self) -> Echelon {
        self.echelon_upto(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank
    }

    pub fn determinant(&self) -> Result<ScalarField> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ScalarField::one(&self.ring);
        for col in 0..n {
            let best = (col..n)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| (m.get(r, col).total_degree(), r));
            let Some(p) = best else {
                return Ok(ScalarField::zero(&self.ring));
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pv = m.get(col, col).clone();
            det = &det * &pv;
            let inv = pv.inv()?;
            for r in col + 1..n {
                let factor = m.get(r, col) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j) - &(&factor * m.get(col, j));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse over the fraction field; `Degenerate` when singular.
    pub fn inverse(&self, what: &'static str) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.ring, n));
        let e = aug.echelon_upto(n);
        if e.rank < n {
            return Err(Error::Degenerate(what));
        }
        Ok(e.reduced.submatrix(0, n, n, n))
    }

    /// Unique solution `x` of `self * x = rhs` (rhs may have several
    /// columns). Fails when the system is inconsistent or underdetermined.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shape");
        let n = self.cols;
        let aug = self.hstack(rhs);
        let e = aug.echelon();
        if e.pivot_cols.iter().any(|&c| c >= n) {
            return Err(Error::Unsolvable("inconsistent system".into()));
        }
        if e.rank < n {
            return Err(Error::Unsolvable(format!(
                "rank {} < {} unknowns",
                e.rank, n
            )));
        }
        Ok(e.reduced.submatrix(0, n, n, rhs.cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    #[test]
    fn inverse_of_polynomial_metric() {
        let r = Ring::new(vec!["x".into(), "y".into()]);
        let x = ScalarField::var(&r, 0);
        let one = ScalarField::one(&r);
        let mut g = Matrix::identity(&r, 2);
        g.set(0, 0, &one + &(&x * &x));
        let inv = g.inverse("metric").unwrap();
        assert_eq!(inv.get(0, 0), &(&one / &(&one + &(&x * &x))));
        assert!(inv.mul(&g).sub(&Matrix::identity(&r, 2)).is_zero());
    }

    #[test]
    fn rank_of_symbolic_matrix() {
        let r = Ring::new(vec!["x".into()]);
        let x = ScalarField::var(&r, 0);
        // rows (1, x) and (x, x^2) are dependent
        let m = Matrix::from_fn(&r, 2, 2, |i, j| {
            let base = if i == 0 {
                ScalarField::one(&r)
            } else {
                x.clone()
            };
            if j == 0 {
                base
            } else {
                &base * &x
            }
        });
        assert_eq!(m.rank(), 1);
        assert!(m.determinant().unwrap().is_zero());
        assert!(matches!(m.inverse("m"), Err(Error::Degenerate(_))));
    }

    #[test]
    fn solve_overdetermined_consistent() {
        let r = Ring::new(vec!["y".into()]);
        let c = |v: i64| ScalarField::constant(&r, GaussianRational::from_int(v));
        // x1 = 2, x2 = 3, x1 + x2 = 5
        let a = Matrix::from_fn(&r, 3, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) | (2, _) => c(1),
            _ => c(0),
        });
        let b = Matrix::from_fn(&r, 3, 1, |i, _| c([2, 3, 5][i]));
        let x = a.solve(&b).unwrap();
        assert_eq!(x.get(0, 0), &c(2));
        assert_eq!(x.get(1, 0), &c(3));
        let bad = Matrix::from_fn(&r, 3, 1, |i, _| c([2, 3, 6][i]));
        assert!(matches!(a.solve(&bad), Err(Error::Unsolvable(_))));
    }
}
