//! Dense matrices over an exact scalar type, with rank by fraction-free
//! Gaussian elimination.
//!
//! The scalar interface is the blanket trait [`MatrixScalar`]; any type with
//! exact ring operations, division, and a decidable zero test qualifies.
//! Rank decisions rely on exact zero tests, so the intended instantiations
//! are [`num_rational::BigRational`] and [`crate::CycScalar`] (the crate
//! exposes them as `RatMatrix` and `CycMatrix`).

use std::ops::{Div, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalars a [`Matrix`] can hold: exact equality, ring operations
/// (addition and multiplication come with [`Zero`] and [`One`]), and
/// division for the fraction-free elimination step.
pub trait MatrixScalar:
    Clone + PartialEq + Zero + One + Sub<Output = Self> + Div<Output = Self>
{
}

impl<T> MatrixScalar for T where
    T: Clone + PartialEq + Zero + One + Sub<Output = Self> + Div<Output = Self>
{
}

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: MatrixScalar> Matrix<T> {
    /// Builds a matrix from row-major data; the length must be rows*cols.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::MatrixShape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::MatrixShape("ragged rows".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix product; errors if the inner dimensions disagree.
    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::MatrixShape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a.clone() * rhs.get(k, j).clone();
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + t);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Rank by fraction-free (Bareiss) elimination.
    ///
    /// Each elimination step forms pivot*a_rc - a_rk*a_kc and divides by the
    /// previous pivot, so intermediate entries are minors of the input and
    /// coefficient growth stays polynomial. Zero tests are exact.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<T>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut prev = T::one();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let pivot_row = m[row].clone();
            let pivot = pivot_row[col].clone();
            for target in m.iter_mut().skip(row + 1) {
                let lead = target[col].clone();
                if lead.is_zero() {
                    continue;
                }
                for (entry, above) in target.iter_mut().zip(&pivot_row).skip(col + 1) {
                    let num = pivot.clone() * entry.clone() - lead.clone() * above.clone();
                    *entry = num / prev.clone();
                }
                target[col] = T::zero();
            }
            prev = pivot;
            row += 1;
        }
        row
    }
}
