//! Dense square matrices over a [`Field`] and a small linear solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Square dense matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Ragged {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, v| T::max_of(acc, v.abs()))
    }

    /// First index pair violating symmetry beyond `tol` (absolute).
    pub fn asymmetry(&self, tol: &T) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.get(i, j).clone() - self.get(j, i).clone()).abs() > *tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(Field::to_f64).collect(),
        }
    }
}

impl Matrix<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

/// Solves `a x = b` by Gaussian elimination with full pivoting.
///
/// Negligible pivots are skipped and their variables set to zero, so a
/// consistent singular system still yields a particular solution. The caller
/// is responsible for checking the residual when consistency is in doubt.
pub fn solve_consistent<T: Field>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Vec<T> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |acc, v| T::max_of(acc, v.abs()));
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        // full pivot search over the remaining block
        let mut best: Option<(usize, usize, T)> = None;
        for (r, row) in a.iter().enumerate().skip(step) {
            for (c, v) in row.iter().enumerate().skip(step) {
                let mag = v.abs();
                if best.as_ref().is_none_or(|(_, _, m)| mag > *m) {
                    best = Some((r, c, mag));
                }
            }
        }
        let Some((pr, pc, mag)) = best else { break };
        if mag.negligible(&scale) {
            break;
        }
        a.swap(step, pr);
        b.swap(step, pr);
        if pc != step {
            for row in a.iter_mut() {
                row.swap(step, pc);
            }
            col_perm.swap(step, pc);
        }
        let pivot = a[step][step].clone();
        for r in (step + 1)..rows {
            if a[r][step].is_zero() {
                continue;
            }
            let factor = a[r][step].clone() / pivot.clone();
            for c in step..cols {
                let delta = factor.clone() * a[step][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            let delta = factor * b[step].clone();
            b[r] = b[r].clone() - delta;
        }
        rank += 1;
    }
    let mut x_perm = vec![T::zero(); cols];
    for i in (0..rank).rev() {
        let mut acc = b[i].clone();
        for c in (i + 1)..rank {
            acc = acc - a[i][c].clone() * x_perm[c].clone();
        }
        x_perm[i] = acc / a[i][i].clone();
    }
    let mut x = vec![T::zero(); cols];
    for (k, &orig) in col_perm.iter().enumerate() {
        x[orig] = x_perm[k].clone();
    }
    x
}
