//! Small dense complex matrices.
//!
//! The interferometer problems here never exceed a handful of modes, so a
//! plain row-major `Vec` is all that is needed.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * m);
        for r in rows {
            if r.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: m,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: n, cols: m, data })
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn diagonal(d: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = Complex<T>> + '_ {
        (0..self.rows).map(move |i| self[(i, j)])
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix product",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `||self - other||_F`, or infinity for mismatched shapes.
    pub fn distance(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// `||A†A - I||_F`.
    pub fn unitarity_deviation(&self) -> T {
        let gram = self.adjoint() * self;
        gram.distance(&Self::identity(self.cols))
    }

    /// Selects rows and columns by index, allowing repeats.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.frobenius_norm().max(T::min_positive_value());
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| {
                    a[(p, col)]
                        .norm()
                        .partial_cmp(&a[(q, col)].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[(pivot, col)].norm() <= T::epsilon() * scale {
                return Err(Error::RankDeficient);
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] -= f * aj;
                    inv[(i, j)] -= f * ij;
                }
            }
        }
        Ok(inv)
    }

    /// Unitary factor of the polar decomposition, the closest unitary in
    /// Frobenius norm. Computed by the Newton iteration `X <- (X + X^-†)/2`.
    pub fn nearest_unitary(&self) -> Result<Self> {
        let mut x = self.clone();
        let half = Complex::new(T::half(), T::zero());
        let tol = T::epsilon() * T::lit(64.0) * T::from_usize_lossy(self.rows.max(1));
        let mut step = T::infinity();
        for _ in 0..100 {
            let next = (x.clone() + x.inverse()?.adjoint()).scale(half);
            step = next.distance(&x);
            x = next;
            if step <= tol {
                return Ok(x);
            }
        }
        Err(Error::NonConvergence {
            iterations: 100,
            residual: step.to_f64_lossy(),
        })
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul<&CMatrix<T>> for CMatrix<T> {
    type Output = CMatrix<T>;
    /// Panics on shape mismatch; use [`CMatrix::matmul`] for a fallible product.
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(rhs).expect("matrix shapes")
    }
}

impl<T: Real> std::ops::Add for CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(mut self, rhs: CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(rhs.data) {
            *a += b;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn inverse_round_trip() {
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(0.2, -1.0), c(0.0, 0.3)],
            vec![c(-0.4, 0.0), c(2.0, 0.1), c(1.0, 1.0)],
            vec![c(0.3, 0.3), c(0.0, -0.7), c(1.5, 0.0)],
        ])
        .unwrap();
        let prod = m.clone() * &m.inverse().unwrap();
        assert!(prod.distance(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn singular_inverse_is_rejected() {
        let m = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::RankDeficient)));
    }

    #[test]
    fn polar_projection_of_perturbed_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_rows(&[
            vec![c(s + 0.01, 0.0), c(s, 0.02)],
            vec![c(s, -0.01), c(-s, 0.0)],
        ])
        .unwrap();
        let u = m.nearest_unitary().unwrap();
        assert!(u.unitarity_deviation() < 1e-13);
        assert!(u.distance(&m) < 0.05);
    }
}
