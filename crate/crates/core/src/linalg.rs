//! Small dense matrices over a [`Scalar`].
//!
//! Everything here is sized for 2x2 and 4x4 work: Gaussian elimination with
//! partial pivoting (by absolute value, which is harmless for exact types).

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row echelon reduction in place; returns (sign of the row permutation,
    /// pivot count). Pivots below `tol` are treated as zero.
    fn eliminate(&mut self, rhs: Option<&mut Matrix<T>>, tol: f64) -> (bool, usize) {
        let mut rhs = rhs;
        let mut negate = false;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let pivot = (rank..self.rows)
                .filter(|&r| !self[(r, col)].is_negligible(tol))
                .max_by(|&r1, &r2| {
                    self[(r1, col)]
                        .abs()
                        .partial_cmp(&self[(r2, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot else { continue };
            if p != rank {
                self.swap_rows(p, rank);
                if let Some(r) = rhs.as_deref_mut() {
                    r.swap_rows(p, rank);
                }
                negate = !negate;
            }
            let pv = self[(rank, col)].clone();
            for r in 0..self.rows {
                if r == rank || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone() / pv.clone();
                for c in col..self.cols {
                    let sub = factor.clone() * self[(rank, c)].clone();
                    self[(r, c)] = self[(r, c)].clone() - sub;
                }
                if let Some(m) = rhs.as_deref_mut() {
                    for c in 0..m.cols {
                        let sub = factor.clone() * m[(rank, c)].clone();
                        m[(r, c)] = m[(r, c)].clone() - sub;
                    }
                }
            }
            rank += 1;
        }
        (negate, rank)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let (negate, rank) = m.eliminate(None, 0.0);
        if rank < self.rows {
            return T::zero();
        }
        let d = (0..self.rows).fold(T::one(), |acc, i| acc * m[(i, i)].clone());
        if negate {
            -d
        } else {
            d
        }
    }

    /// Rank with pivots of magnitude `<= tol` treated as zero.
    pub fn rank(&self, tol: f64) -> usize {
        self.clone().eliminate(None, tol).1
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        let (_, rank) = m.eliminate(Some(&mut inv), 0.0);
        if rank < n {
            return None;
        }
        for i in 0..n {
            let pv = m[(i, i)].clone();
            for c in 0..n {
                inv[(i, c)] = inv[(i, c)].clone() / pv.clone();
            }
        }
        Some(inv)
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let inv = self.inverse()?;
        Some(inv.mul_vec(b))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}
