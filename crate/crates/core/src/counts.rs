//! Detector count records.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Counts from one detection channel during one integration window.
///
/// Counts are real-valued because accidental-corrected and normalized
/// counts are fractional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountRecord<T> {
    pub raw: T,
    pub accidental: T,
    /// Seconds.
    pub integration_time: T,
}

impl<T: Real> CountRecord<T> {
    pub fn new(raw: T, accidental: T, integration_time: T) -> Result<Self> {
        if !(raw >= T::zero()) {
            return Err(Error::NegativeCount(raw.to_f64_lossy()));
        }
        if !(accidental >= T::zero()) {
            return Err(Error::NegativeCount(accidental.to_f64_lossy()));
        }
        if !(integration_time >= T::zero()) {
            return Err(Error::invalid("integration_time", "must be non-negative"));
        }
        Ok(Self {
            raw,
            accidental,
            integration_time,
        })
    }

    pub fn raw_only(raw: T) -> Result<Self> {
        Self::new(raw, T::zero(), T::zero())
    }

    /// `raw - accidental`, unclamped; may be negative.
    pub fn background_subtracted(&self) -> T {
        self.raw - self.accidental
    }

    /// Poissonian uncertainty of the raw count.
    pub fn sigma(&self) -> T {
        self.raw.sqrt()
    }
}

/// Poissonian standard deviation `sqrt(count)`.
pub fn poisson_sigma<T: Real>(count: T) -> Result<T> {
    if !(count >= T::zero()) {
        return Err(Error::NegativeCount(count.to_f64_lossy()));
    }
    Ok(count.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_sigma_values() {
        assert_eq!(poisson_sigma(0.0f64).unwrap(), 0.0);
        assert!((poisson_sigma(1200.0f64).unwrap() - 34.64101615137755).abs() < 1e-12);
        assert!((poisson_sigma(600.0f64).unwrap() - 24.49489742783178).abs() < 1e-12);
        assert!(matches!(poisson_sigma(-1.0f64), Err(Error::NegativeCount(_))));
    }

    #[test]
    fn subtraction_is_not_clamped() {
        let r = CountRecord::new(5.0f64, 7.0, 1.0).unwrap();
        assert_eq!(r.background_subtracted(), -2.0);
        assert!(CountRecord::new(-1.0f64, 0.0, 1.0).is_err());
    }
}
