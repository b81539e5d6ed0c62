//! Dense real matrix in row-major order.
//!
//! `Matrix` is the universal carrier for every array in this crate: data
//! matrices, factor matrices, regulariser matrices, rotations. Entries are
//! `f64`, storage is a flat `Vec<f64>` with `data[i * cols + j] = A[i, j]`.
//! Construction rejects non-finite entries, so every operation may assume an
//! all-finite input. Values are immutable in the solver APIs and safe to
//! share across threads.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, rejecting length mismatches,
    /// zero dimensions and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        for (idx, &x) in data.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / cols,
                    col: idx % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::ZeroDimension {
                rows: rows.len(),
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DataLength {
                    rows: rows.len(),
                    cols,
                    expected: cols,
                    got: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(x);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Fills a matrix entry by entry; `f(i, j)` must return finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert!(x.is_finite(), "from_fn produced non-finite at ({i},{j})");
                m.data[i * cols + j] = x;
            }
        }
        m
    }

    /// Single-column matrix from a slice.
    pub fn column_vector(v: &[f64]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Sets one entry; the value must be finite.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        assert!(value.is_finite(), "set called with non-finite value");
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[f64]) {
        assert_eq!(col.len(), self.rows, "column length mismatch");
        for (i, &x) in col.iter().enumerate() {
            self.set(i, j, x);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Matrix product `self * rhs`. Panics on inner-dimension mismatch;
    /// solver entry points validate shapes before calling in here.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &aik) in a_row.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let b_row = rhs.row(k);
                for (j, &bkj) in b_row.iter().enumerate() {
                    out_row[j] += aik * bkj;
                }
            }
        }
        out
    }

    /// `self * x` for a vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), x))
            .collect()
    }

    /// `selfᵀ * x` without forming the transpose.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "matrix-vector dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &aij) in self.row(i).iter().enumerate() {
                out[j] += aij * xi;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// `self + factor * rhs`.
    pub fn add_scaled(&self, rhs: &Self, factor: f64) -> Self {
        self.zip_with(rhs, |a, b| a + factor * b)
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= factor;
        }
        out
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Sum of squared entries. The squares are accumulated in sorted order,
    /// which makes the result invariant under transposition (the multiset of
    /// addends is the same for `X` and `Xᵀ`) and slightly more accurate than
    /// a storage-order sum.
    pub fn frobenius_norm_sq(&self) -> f64 {
        let mut squares: Vec<f64> = self.data.iter().map(|&x| x * x).collect();
        squares.sort_unstable_by(f64::total_cmp);
        squares.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// `‖self − selfᵀ‖` in Frobenius norm; zero for a square symmetric matrix.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square(), "asymmetry requires a square matrix");
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = self.get(i, j) - self.get(j, i);
                acc += 2.0 * d * d;
            }
        }
        acc.sqrt()
    }

    /// `(self + selfᵀ) / 2`, exactly symmetric by construction.
    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square(), "symmetrized requires a square matrix");
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.data[i * n + i] = self.get(i, i);
            for j in (i + 1)..n {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                out.data[i * n + j] = v;
                out.data[j * n + i] = v;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// `Σᵢⱼ Xᵢⱼ (S·X)ᵢⱼ = Tr(Xᵀ S X)`, accumulated in a fixed order.
pub fn trace_quadratic_form(x: &Matrix, s: &Matrix) -> f64 {
    assert_eq!(s.cols(), x.rows(), "trace_quadratic_form shape mismatch");
    let sx = s.mul(x);
    dot(x.data(), sx.data())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_identity_and_zero() {
        assert_eq!(Matrix::identity(2).frobenius_norm_sq(), 2.0);
        assert_eq!(Matrix::zeros(3, 4).frobenius_norm_sq(), 0.0);
    }

    #[test]
    fn frobenius_sum_of_squares() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(a.frobenius_norm_sq(), 30.0);
    }

    #[test]
    fn frobenius_transpose_invariant_exactly() {
        let a = Matrix::from_rows(&[
            vec![0.1, -2.7, 3.3e-3],
            vec![1.0 / 3.0, 7.7e8, -0.25],
        ])
        .unwrap();
        assert_eq!(a.frobenius_norm_sq(), a.transpose().frobenius_norm_sq());
    }

    #[test]
    fn rejects_non_finite() {
        let err = Matrix::new(1, 2, vec![1.0, f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn rejects_length_mismatch() {
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0; 3]),
            Err(Error::DataLength { .. })
        ));
    }

    #[test]
    fn product_agrees_with_hand_example() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let c = a.mul(&b);
        assert_eq!(c.row(0), &[19.0, 22.0]);
        assert_eq!(c.row(1), &[43.0, 50.0]);
    }

    #[test]
    fn tr_mul_vec_matches_transpose_mul() {
        let a = Matrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![3.0, 4.0, -1.0]]).unwrap();
        let x = [0.3, -0.8];
        assert_eq!(a.tr_mul_vec(&x), a.transpose().mul_vec(&x));
    }

    #[test]
    fn symmetrized_is_exactly_symmetric() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.5, -1.0]]).unwrap();
        let s = a.symmetrized();
        assert_eq!(s.get(0, 1), s.get(1, 0));
        assert_eq!(s.asymmetry(), 0.0);
    }

    #[test]
    fn trace_quadratic_form_matches_explicit_trace() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.5, -1.0], vec![2.0, 0.0]]).unwrap();
        let s = Matrix::from_rows(&[
            vec![2.0, 0.1, 0.0],
            vec![0.1, 1.0, -0.3],
            vec![0.0, -0.3, 4.0],
        ])
        .unwrap();
        let direct = trace_quadratic_form(&x, &s);
        let full = x.transpose().mul(&s).mul(&x);
        let trace = full.get(0, 0) + full.get(1, 1);
        assert!((direct - trace).abs() <= 1e-12 * trace.abs().max(1.0));
    }
}
