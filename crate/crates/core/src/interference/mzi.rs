use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::unitary::Unitary;

/// Two directional couplers around a phase section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MziParams<T> {
    /// Reflectivity (bar-state power fraction) of the input coupler.
    pub eta1: T,
    /// Reflectivity of the output coupler.
    pub eta2: T,
    /// Internal phase, rad.
    pub phi: T,
}

impl<T: Real> MziParams<T> {
    /// Balanced couplers.
    pub fn ideal(phi: T) -> Self {
        Self {
            eta1: T::half(),
            eta2: T::half(),
            phi,
        }
    }

    pub fn with_phase(self, phi: T) -> Self {
        Self { phi, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, eta) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !(eta >= T::zero() && eta <= T::one()) {
                return Err(Error::invalid(field, format!("reflectivity must lie in [0, 1], got {eta}")));
            }
        }
        if !self.phi.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(())
    }
}

fn coupler<T: Real>(eta: T) -> CMatrix<T> {
    let t = Complex::new(eta.sqrt(), T::zero());
    let r = Complex::new(T::zero(), (T::one() - eta).sqrt());
    CMatrix::from_rows(&[vec![t, r], vec![r, t]]).expect("2x2")
}

/// Mode transformation of the interferometer, indexed `(output, input)`.
///
/// With balanced couplers this is the real symmetric matrix
/// `[[sin(phi/2), cos(phi/2)], [cos(phi/2), -sin(phi/2)]]`; unbalanced
/// couplers keep the same global phase and port sign convention.
pub fn mzi_unitary<T: Real>(params: &MziParams<T>) -> Result<Unitary<T>> {
    params.validate()?;
    let half = params.phi * T::half();
    let one = Complex::new(T::one(), T::zero());
    let section = CMatrix::diagonal(&[Complex::from_polar(T::one(), -params.phi), one]);
    let signs = CMatrix::diagonal(&[one, -one]);
    let m = signs.clone() * &coupler(params.eta2) * &section * &coupler(params.eta1) * &signs;
    let global = Complex::new(T::zero(), T::one()) * Complex::from_polar(T::one(), half);
    let mut m = m.scale(global);
    if params.eta1 == T::half() && params.eta2 == T::half() {
        // exact real entries for the balanced device
        let (s, c) = half.sin_cos();
        m = CMatrix::from_real_rows(&[vec![s, c], vec![c, -s]]).expect("2x2");
    }
    Unitary::new(m)
}

/// Normalised intensity at the output port of a classical fringe,
/// `(1 + V cos(phi0 + alpha P)) / 2`. The complementary port carries one
/// minus this value.
pub fn classical_fringe<T: Real>(phi0: T, alpha: T, visibility: T, power: T) -> T {
    T::half() * (T::one() + visibility * (phi0 + alpha * power).cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(u: &Unitary<f64>, expected: [[f64; 2]; 2], tol: f64) {
        let target = CMatrix::from_real_rows(&[expected[0].to_vec(), expected[1].to_vec()]).unwrap();
        assert!(u.matrix().distance(&target) < tol, "{:?}", u.matrix());
    }

    #[test]
    fn identity_with_minus_one_at_pi() {
        close(&mzi_unitary(&MziParams::ideal(PI)).unwrap(), [[1.0, 0.0], [0.0, -1.0]], 1e-15);
    }

    #[test]
    fn swap_at_two_pi() {
        close(&mzi_unitary(&MziParams::ideal(2.0 * PI)).unwrap(), [[0.0, -1.0], [-1.0, 0.0]], 1e-15);
    }

    #[test]
    fn balanced_at_quarter_turns() {
        for phi in [PI / 2.0, 1.5 * PI] {
            let u = mzi_unitary(&MziParams::ideal(phi)).unwrap();
            for p in u.matrix().as_slice() {
                assert!((p.norm() - 0.5f64.sqrt()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fringe_values() {
        assert_eq!(classical_fringe(0.0, 1.0, 1.0, 0.0), 1.0);
        assert!((classical_fringe(PI / 2.0, 0.0, 0.3, 0.0) - 0.5).abs() < 1e-16);
        let v = classical_fringe(0.837, 13.43, 0.964, 0.234);
        assert!((v - 0.5 * (1.0 + 0.964 * (0.837f64 + 13.43 * 0.234).cos())).abs() < 1e-15);
        assert!((v - 0.179).abs() < 2e-3);
    }

    #[test]
    fn rejects_bad_reflectivity() {
        let p = MziParams { eta1: 1.2, eta2: 0.5, phi: 0.0 };
        assert!(mzi_unitary(&p).is_err());
    }

    proptest! {
        #[test]
        fn general_couplers_reduce_to_ideal(phi in -10.0..10.0f64) {
            let exact = mzi_unitary(&MziParams::ideal(phi)).unwrap();
            let nearly = mzi_unitary(&MziParams { eta1: 0.5 + 1e-13, eta2: 0.5, phi }).unwrap();
            prop_assert!(exact.matrix().distance(nearly.matrix()) < 1e-12);
        }

        #[test]
        fn unbalanced_is_unitary(e1 in 0.0..1.0f64, e2 in 0.0..1.0f64, phi in -7.0..7.0f64) {
            let u = mzi_unitary(&MziParams { eta1: e1, eta2: e2, phi }).unwrap();
            prop_assert!(u.matrix().unitarity_deviation() < 1e-12);
        }

        #[test]
        fn fringe_stays_in_band(v in 0.0..1.0f64, phase in -20.0..20.0f64) {
            let i = classical_fringe(phase, 0.0, v, 0.0);
            prop_assert!(i >= (1.0 - v) / 2.0 - 1e-15 && i <= (1.0 + v) / 2.0 + 1e-15);
        }
    }
}
