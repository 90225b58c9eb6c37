//! Dense real linear algebra for the small systems arising in the fits.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            what: "linear system",
            expected: n,
            found: b.len(),
        });
    }
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |acc, &x| acc.max(x.abs()))
        .max(T::min_positive_value());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| {
                m[p][col]
                    .abs()
                    .partial_cmp(&m[q][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if m[pivot][col].abs() <= T::epsilon() * scale * T::from_usize_lossy(n) {
            return Err(Error::RankDeficient);
        }
        m.swap(col, pivot);
        for i in col + 1..n {
            let f = m[i][col] / m[col][col];
            if f == T::zero() {
                continue;
            }
            for j in col..=n {
                let v = m[col][j];
                m[i][j] -= f * v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let s: T = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Ok(x)
}

/// Inverse of a square matrix, column by column.
pub fn invert<T: Real>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![T::zero(); n];
        e[k] = T::one();
        cols.push(solve(a, &e)?);
    }
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// Result of an ordinary linear least-squares fit `y ~ X beta`.
#[derive(Clone, Debug)]
pub struct LeastSquares<T> {
    pub coefficients: Vec<T>,
    /// `(X^T X)^-1`; multiply by the residual variance for the covariance.
    pub unscaled_covariance: Vec<Vec<T>>,
    pub residuals: Vec<T>,
    pub rss: T,
}

/// Householder-QR least squares. Fails with [`Error::RankDeficient`] when a
/// column of `x` is (numerically) a combination of the others.
pub fn least_squares<T: Real>(x: &[Vec<T>], y: &[T]) -> Result<LeastSquares<T>> {
    let m = x.len();
    let p = x.first().map_or(0, Vec::len);
    if y.len() != m {
        return Err(Error::DimensionMismatch {
            what: "least-squares rows",
            expected: m,
            found: y.len(),
        });
    }
    if m < p || p == 0 {
        return Err(Error::RankDeficient);
    }
    let mut a: Vec<Vec<T>> = x.to_vec();
    let mut b = y.to_vec();
    let col_norms: Vec<T> = (0..p)
        .map(|j| a.iter().map(|r| r[j] * r[j]).sum::<T>().sqrt())
        .collect();
    let rank_tol = T::epsilon().sqrt() * T::lit(1e-2);
    for k in 0..p {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<T>().sqrt();
        if norm <= rank_tol * col_norms[k] || col_norms[k] == T::zero() {
            return Err(Error::RankDeficient);
        }
        let alpha = if a[k][k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|&t| t * t).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        for j in k..p {
            let d: T = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = T::two() * d / vnorm2;
            for i in k..m {
                a[i][j] -= f * v[i - k];
            }
        }
        let d: T = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = T::two() * d / vnorm2;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let mut beta = vec![T::zero(); p];
    for i in (0..p).rev() {
        let s: T = (i + 1..p).map(|j| a[i][j] * beta[j]).sum();
        beta[i] = (b[i] - s) / a[i][i];
    }
    // R^-1 by back substitution, then (X^T X)^-1 = R^-1 R^-T.
    let mut rinv = vec![vec![T::zero(); p]; p];
    for j in 0..p {
        rinv[j][j] = T::one() / a[j][j];
        for i in (0..j).rev() {
            let s: T = (i + 1..=j).map(|l| a[i][l] * rinv[l][j]).sum();
            rinv[i][j] = -s / a[i][i];
        }
    }
    let cov: Vec<Vec<T>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| (0..p).map(|l| rinv[i][l] * rinv[j][l]).sum())
                .collect()
        })
        .collect();
    let residuals: Vec<T> = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| yi - row.iter().zip(&beta).map(|(&a, &b)| a * b).sum::<T>())
        .collect();
    let rss = residuals.iter().map(|&r| r * r).sum();
    Ok(LeastSquares {
        coefficients: beta,
        unscaled_covariance: cov,
        residuals,
        rss,
    })
}
