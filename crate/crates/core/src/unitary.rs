//! Mode transformations of a lossless linear-optical circuit.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// A `dim x dim` unitary acting on optical modes.
///
/// Entry `(j, i)` is the amplitude for a photon entering input mode `i` to
/// leave from output mode `j`; column `i` is therefore the output field of a
/// single photon injected in mode `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> Unitary<T> {
    /// Accepts `entries` if it is square, at least 2x2 and unitary to within
    /// [`Real::UNITARY_TOL`] in Frobenius norm.
    pub fn new(entries: CMatrix<T>) -> Result<Self> {
        Self::with_tolerance(entries, T::lit(T::UNITARY_TOL))
    }

    pub(crate) fn with_tolerance(entries: CMatrix<T>, tol: T) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NonSquare {
                rows: entries.rows(),
                cols: entries.cols(),
            });
        }
        if entries.rows() < 2 {
            return Err(Error::invalid("dim", "a unitary needs at least two modes"));
        }
        let deviation = entries.unitarity_deviation();
        if !(deviation <= tol) {
            return Err(Error::NonUnitary {
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(Self { matrix: entries })
    }

    /// Projects an arbitrary invertible matrix onto the closest unitary.
    pub fn nearest(entries: &CMatrix<T>) -> Result<Self> {
        Self::new(entries.nearest_unitary()?)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn get(&self, out_mode: usize, in_mode: usize) -> Complex<T> {
        self.matrix[(out_mode, in_mode)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self * rhs`, i.e. `rhs` acts first. The product is re-checked with
    /// twice the construction tolerance.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        let m = self.matrix.matmul(&rhs.matrix)?;
        Self::with_tolerance(m, T::lit(2.0 * T::UNITARY_TOL))
    }

    /// Multiplies by a global phase `e^{i theta}`.
    pub fn with_global_phase(&self, theta: T) -> Self {
        Self {
            matrix: self.matrix.scale(Complex::from_polar(T::one(), theta)),
        }
    }

    /// Single-photon transition probabilities `|U_ji|^2`, indexed `[i][j]`
    /// (input row, output column).
    pub fn transition_probabilities(&self) -> Vec<Vec<T>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(j, i).norm_sqr()).collect())
            .collect()
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }
}

/// Haar-distributed unitary: the polar factor of a complex Gaussian matrix.
pub fn random_haar<T: Real, R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Unitary<T>> {
    use rand_distr::{Distribution, StandardNormal};
    let data = (0..dim * dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    Unitary::nearest(&CMatrix::from_vec(dim, dim, data)?)
}

/// Checks and wraps a square complex matrix.
pub fn make_unitary<T: Real>(entries: CMatrix<T>) -> Result<Unitary<T>> {
    Unitary::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(rows: &[Vec<f64>]) -> CMatrix<f64> {
        CMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn accepts_identity_and_phase_flip() {
        assert!(make_unitary(real(&[vec![1.0, 0.0], vec![0.0, 1.0]])).is_ok());
        assert!(make_unitary(real(&[vec![1.0, 0.0], vec![0.0, -1.0]])).is_ok());
    }

    #[test]
    fn rejects_rank_one() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let err = make_unitary(real(&[vec![s, s], vec![s, s]])).unwrap_err();
        assert!(matches!(err, Error::NonUnitary { .. }));
    }

    #[test]
    fn rejects_non_square_and_scalar() {
        let m = CMatrix::<f64>::zeros(2, 3);
        assert!(matches!(make_unitary(m), Err(Error::NonSquare { .. })));
        assert!(matches!(
            make_unitary(CMatrix::<f64>::identity(1)),
            Err(Error::InvalidParams { .. })
        ));
    }

    #[test]
    fn f32_unitaries_use_single_precision_tolerance() {
        let h = std::f32::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap();
        assert!(Unitary::<f32>::new(m).is_ok());
    }

    fn unitary_from_angles(a: f64, b: f64, c: f64, d: f64) -> Unitary<f64> {
        // e^{ia} [[e^{ib} cos c, e^{id} sin c], [-e^{-id} sin c, e^{-ib} cos c]]
        let g = Complex::from_polar(1.0, a);
        let m = CMatrix::from_rows(&[
            vec![g * Complex::from_polar(c.cos(), b), g * Complex::from_polar(c.sin(), d)],
            vec![
                -g * Complex::from_polar(c.sin(), -d),
                g * Complex::from_polar(c.cos(), -b),
            ],
        ])
        .unwrap();
        Unitary::new(m).unwrap()
    }

    proptest! {
        #[test]
        fn columns_are_orthonormal(a in -3.2..3.2f64, b in -3.2..3.2f64, c in -3.2..3.2f64, d in -3.2..3.2f64) {
            let u = unitary_from_angles(a, b, c, d);
            let m = u.matrix();
            for i in 0..2 {
                let norm: f64 = m.column(i).map(|z| z.norm_sqr()).sum();
                prop_assert!((norm - 1.0).abs() < 1e-10);
            }
            let ip: Complex<f64> = m.column(0).zip(m.column(1)).map(|(x, y)| x.conj() * y).sum();
            prop_assert!(ip.norm() < 1e-10);
        }

        #[test]
        fn composition_stays_unitary(p in proptest::array::uniform8(-3.2..3.2f64)) {
            let u = unitary_from_angles(p[0], p[1], p[2], p[3]);
            let v = unitary_from_angles(p[4], p[5], p[6], p[7]);
            prop_assert!(u.compose(&v).is_ok());
        }
    }
}
