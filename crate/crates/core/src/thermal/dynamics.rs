use crate::error::{Error, Result};
use crate::scalar::Real;

/// First-order phase response to a heater voltage step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResponse<T> {
    /// Time constant, s.
    pub tau: T,
    pub phi_initial: T,
    pub phi_final: T,
}

impl<T: Real> StepResponse<T> {
    pub fn new(tau: T, phi_initial: T, phi_final: T) -> Result<Self> {
        if !(tau > T::zero() && tau.is_finite()) {
            return Err(Error::invalid("tau", "time constant must be > 0"));
        }
        Ok(Self {
            tau,
            phi_initial,
            phi_final,
        })
    }

    /// Response whose 10%-90% rise time is `rise_time`: `tau = t_r / ln 9`.
    pub fn from_rise_time(rise_time: T, phi_initial: T, phi_final: T) -> Result<Self> {
        Self::new(rise_time / T::lit(9.0).ln(), phi_initial, phi_final)
    }

    /// Closed-form 10%-90% rise time, `tau ln 9`.
    pub fn rise_time(&self) -> T {
        self.tau * T::lit(9.0).ln()
    }

    /// Time at which the response has covered `fraction` of the step.
    pub fn time_to_fraction(&self, fraction: T) -> Option<T> {
        (fraction >= T::zero() && fraction < T::one()).then(|| -self.tau * (T::one() - fraction).ln())
    }
}

/// `phi(t) = phi_final + (phi_initial - phi_final) exp(-t / tau)`.
pub fn step_phase<T: Real>(response: &StepResponse<T>, t: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(Error::invalid("t", "time must be >= 0"));
    }
    Ok(response.phi_final + (response.phi_initial - response.phi_final) * (-t / response.tau).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_step() -> StepResponse<f64> {
        // 1.213 rad -> 1.859 rad
        StepResponse::from_rise_time(0.9, 1.213, 1.859).unwrap()
    }

    #[test]
    fn endpoints() {
        let s = paper_step();
        assert_eq!(step_phase(&s, 0.0).unwrap(), 1.213);
        let late = step_phase(&s, 20.0 * s.tau).unwrap();
        assert!((late - 1.859).abs() < 1e-6);
        assert!(step_phase(&s, -1.0).is_err());
    }

    #[test]
    fn closed_form_rise_time() {
        let s = paper_step();
        assert!((s.tau - 0.9 / 9f64.ln()).abs() < 1e-15);
        assert!((s.tau - 0.4096).abs() < 1e-4);
        let t10 = s.time_to_fraction(0.1).unwrap();
        let t90 = s.time_to_fraction(0.9).unwrap();
        assert!((t90 - t10 - 0.9).abs() < 1e-12);
        assert!((s.rise_time() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_tau() {
        assert!(StepResponse::new(0.0, 0.0, 1.0f64).is_err());
    }
}
