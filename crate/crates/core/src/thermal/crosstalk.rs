use crate::error::{Error, Result};
use crate::scalar::Real;

/// Affine phase response of one interferometer to every heater on the chip:
/// `phi = phi0 + sum_i alpha_i P_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrosstalkModel<T> {
    /// Phase with all heaters off, rad.
    pub phi0: T,
    /// rad/W, one per heater.
    pub alphas: Vec<T>,
}

impl<T: Real> CrosstalkModel<T> {
    pub fn new(phi0: T, alphas: Vec<T>) -> Result<Self> {
        if !phi0.is_finite() || alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("alphas", "entries must be finite"));
        }
        Ok(Self { phi0, alphas })
    }

    pub fn single(phi0: T, alpha: T) -> Self {
        Self {
            phi0,
            alphas: vec![alpha],
        }
    }

    pub fn heaters(&self) -> usize {
        self.alphas.len()
    }

    /// Power on one heater for a `2 pi` phase excursion.
    pub fn power_for_full_turn(&self, heater: usize) -> Option<T> {
        self.alphas
            .get(heater)
            .filter(|a| **a != T::zero())
            .map(|a| T::TAU() / a.abs())
    }
}

/// Evaluates the interferometer phase for the given heater powers (W).
pub fn phase_from_powers<T: Real>(model: &CrosstalkModel<T>, powers: &[T]) -> Result<T> {
    if powers.len() != model.alphas.len() {
        return Err(Error::DimensionMismatch {
            what: "heater powers",
            expected: model.alphas.len(),
            found: powers.len(),
        });
    }
    if let Some(p) = powers.iter().find(|p| !(**p >= T::zero())) {
        return Err(Error::invalid("powers", format!("dissipated power must be >= 0, got {p}")));
    }
    Ok(model.phi0
        + model
            .alphas
            .iter()
            .zip(powers)
            .map(|(&a, &p)| a * p)
            .sum::<T>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_heater_at_rest() {
        let m = CrosstalkModel::<f64>::single(0.837, 13.43);
        assert_eq!(phase_from_powers(&m, &[0.0]).unwrap(), 0.837);
    }

    #[test]
    fn two_heater_plane() {
        let m = CrosstalkModel::<f64>::new(-0.17, vec![13.16, -8.77]).unwrap();
        let phi = phase_from_powers(&m, &[0.2, 0.2]).unwrap();
        assert!((phi - 0.708).abs() < 1e-12);
    }

    #[test]
    fn zero_coupling_and_errors() {
        let m = CrosstalkModel::new(1.5, vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(phase_from_powers(&m, &[0.1, 0.7, 2.0]).unwrap(), 1.5);
        assert!(matches!(
            phase_from_powers(&m, &[0.1]),
            Err(Error::DimensionMismatch { expected: 3, found: 1, .. })
        ));
        assert!(phase_from_powers(&m, &[0.1, -0.1, 0.0]).is_err());
        assert!(CrosstalkModel::new(f64::NAN, vec![]).is_err());
    }

    #[test]
    fn full_turn_power() {
        let m = CrosstalkModel::<f64>::single(0.837, 13.43);
        let p = m.power_for_full_turn(0).unwrap();
        assert!((p - 0.46784).abs() < 1e-5);
        assert!(m.power_for_full_turn(1).is_none());
    }

    proptest! {
        #[test]
        fn additive_over_heaters(a1 in -20.0..20.0f64, a2 in -20.0..20.0f64, p1 in 0.0..1.0f64, p2 in 0.0..1.0f64) {
            let m = CrosstalkModel::new(0.3, vec![a1, a2]).unwrap();
            let both = phase_from_powers(&m, &[p1, p2]).unwrap();
            let one = phase_from_powers(&m, &[p1, 0.0]).unwrap();
            let two = phase_from_powers(&m, &[0.0, p2]).unwrap();
            prop_assert!((both - (one + two - m.phi0)).abs() < 1e-12);
        }
    }
}
