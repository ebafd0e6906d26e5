//! Small dense matrices over any [`Scalar`].
//!
//! Dimensions in this crate never exceed 8, so everything is a flat
//! row-major `Vec`. Routines that only make sense on plain floats
//! (eigenvalues, singular values) go through nalgebra.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::autodiff::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_f64(m: &Mat<f64>) -> Self {
        Self::from_fn(m.rows, m.cols, |i, j| S::cst(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, &vj) in v.iter().enumerate() {
                    acc += self[(i, j)] * vj;
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scaled(&self, k: S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * k)
    }

    /// Bilinear form `uᵀ M v`.
    pub fn bilinear(&self, u: &[S], v: &[S]) -> S {
        let mut acc = S::zero();
        for i in 0..self.rows {
            let mut row = S::zero();
            for j in 0..self.cols {
                row += self[(i, j)] * v[j];
            }
            acc += u[i] * row;
        }
        acc
    }

    /// Gauss-Jordan inverse with partial pivoting on the real parts.
    /// Returns `None` when a pivot falls below `1e-300` in magnitude.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].re().abs().total_cmp(&a[(y, col)].re().abs()))?;
            if a[(pivot, col)].re().abs() < 1e-300 {
                return None;
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = S::one() / a[(col, col)];
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f == S::zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a[(col, j)];
                    a[(i, j)] -= f * t;
                    let t = inv[(col, j)];
                    inv[(i, j)] -= f * t;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn real_parts(&self) -> Mat<f64> {
        self.map(|x| x.re())
    }

    pub fn is_finite_all(&self) -> bool {
        self.data.iter().all(Scalar::is_finite_all)
    }
}

impl Mat<f64> {
    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest entry of `|M - Mᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the symmetric part.
    pub fn min_symmetric_eigenvalue(&self) -> f64 {
        let m = self.to_nalgebra();
        let sym = (&m + m.transpose()) * 0.5;
        sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    let mut acc = S::zero();
    for (&a, &b) in u.iter().zip(v) {
        acc += a * b;
    }
    acc
}

pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn add<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter().zip(v).map(|(&a, &b)| a + b).collect()
}

pub fn sub<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter().zip(v).map(|(&a, &b)| a - b).collect()
}

pub fn scale<S: Scalar>(k: S, v: &[S]) -> Vec<S> {
    v.iter().map(|&a| k * a).collect()
}

/// Euclidean squared length of the component vector.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

pub fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

pub fn max_abs_diff(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::Dual;
    use approx::assert_abs_diff_eq;

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![3.0, 0.0, 5.0],
        ]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(id[(i, j)], if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn inverse_differentiates() {
        // d/dt (A + tB)^{-1} = -A^{-1} B A^{-1}
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let b = Mat::from_rows(&[vec![0.5, -1.0], vec![0.0, 2.0]]);
        let ad = Mat::from_fn(2, 2, |i, j| Dual::seeded(a[(i, j)], b[(i, j)]));
        let inv = ad.inverse().unwrap();
        let ai = a.inverse().unwrap();
        let expected = ai.mul(&b).mul(&ai);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(inv[(i, j)].eps, -expected[(i, j)], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn symmetric_eigen_and_svd() {
        let m = Mat::from_rows(&[vec![4.0, 0.0], vec![0.0, 0.25]]);
        assert_abs_diff_eq!(m.min_symmetric_eigenvalue(), 0.25, epsilon = 1e-14);
        let j = Mat::from_rows(&[vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 2.0]]);
        let s = j.singular_values();
        assert_abs_diff_eq!(s[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[1], 2.0, epsilon = 1e-14);
    }
}
