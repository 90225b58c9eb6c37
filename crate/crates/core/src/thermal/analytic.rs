//! Wire-heater model: logarithmic temperature profile in the glass half-space
//! and the resulting phase-per-watt coefficient.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Chip thickness, used as the radius at which the logarithmic profile
/// returns to the base temperature.
pub const DEFAULT_REFERENCE_RADIUS: f64 = 1e-3;

/// Substrate and optical constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams<T> {
    /// Thermal conductivity, W m^-1 K^-1.
    pub kappa: T,
    /// Thermo-optic coefficient dn/dT, K^-1.
    pub thermo_optic: T,
    /// Vacuum wavelength, m.
    pub wavelength: T,
}

impl<T: Real> MaterialParams<T> {
    /// Borosilicate glass at 1550 nm: kappa = 0.9, n_T = 1e-5, lambda = 1.55 um.
    pub fn borosilicate_1550() -> Self {
        Self {
            kappa: T::lit(0.9),
            thermo_optic: T::lit(1e-5),
            wavelength: T::lit(1.55e-6),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("kappa", self.kappa)?;
        positive("thermo_optic", self.thermo_optic)?;
        positive("wavelength", self.wavelength)
    }
}

impl<T: Real> Default for MaterialParams<T> {
    fn default() -> Self {
        Self::borosilicate_1550()
    }
}

/// Position of the two interferometer arms relative to one wire heater.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShifterGeometry<T> {
    /// Heater to arm 1 distance, m.
    pub rho1: T,
    /// Heater to arm 2 distance, m.
    pub rho2: T,
    /// Length of the straight arm segments, m.
    pub arm_length: T,
    /// Heater length, m.
    pub wire_length: T,
}

impl<T: Real> ShifterGeometry<T> {
    /// Geometry with the given `ln(rho1 / rho2)`, arm 2 at 1 mm from the wire.
    pub fn from_log_ratio(log_ratio: T, arm_length: T, wire_length: T) -> Self {
        let rho2 = T::lit(1e-3);
        Self {
            rho1: rho2 * log_ratio.exp(),
            rho2,
            arm_length,
            wire_length,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("rho1", self.rho1)?;
        positive("rho2", self.rho2)?;
        positive("arm_length", self.arm_length)?;
        positive("wire_length", self.wire_length)
    }

    /// `ln(rho1 / rho2)`, evaluated as a difference of logarithms so that
    /// swapping the arms negates it exactly.
    pub fn log_ratio(&self) -> T {
        self.rho1.ln() - self.rho2.ln()
    }

    pub fn swapped(&self) -> Self {
        Self {
            rho1: self.rho2,
            rho2: self.rho1,
            ..*self
        }
    }
}

fn positive<T: Real>(field: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

/// Phase-per-watt coefficient of a wire heater acting on both arms,
/// `alpha = (2 n_T / lambda) (1 / kappa) (L_arm / L_wire) ln(rho1 / rho2)` in
/// rad/W. Symmetric arms give exactly zero.
pub fn predict_alpha<T: Real>(geom: &ShifterGeometry<T>, mat: &MaterialParams<T>) -> Result<T> {
    geom.validate()?;
    mat.validate()?;
    Ok(alpha_per_log_ratio(geom.arm_length, geom.wire_length, mat) * geom.log_ratio())
}

/// Slope of alpha against `ln(rho1 / rho2)`.
pub fn alpha_per_log_ratio<T: Real>(arm_length: T, wire_length: T, mat: &MaterialParams<T>) -> T {
    T::two() * mat.thermo_optic / mat.wavelength / mat.kappa * arm_length / wire_length
}

/// `T(rho) = T0 + C2 ln(rho_ref / rho)` with `C2 = P / (pi kappa L_wire)`:
/// the cylindrical solution around a line source with all the power flowing
/// into the glass half-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogTemperature<T> {
    pub power: T,
    pub kappa: T,
    pub wire_length: T,
    pub base_temperature: T,
    pub reference_radius: T,
}

impl<T: Real> LogTemperature<T> {
    pub fn new(
        power: T,
        geom: &ShifterGeometry<T>,
        mat: &MaterialParams<T>,
        base_temperature: T,
    ) -> Result<Self> {
        geom.validate()?;
        mat.validate()?;
        if !(power >= T::zero()) {
            return Err(Error::invalid("power", "must be non-negative"));
        }
        Ok(Self {
            power,
            kappa: mat.kappa,
            wire_length: geom.wire_length,
            base_temperature,
            reference_radius: T::lit(DEFAULT_REFERENCE_RADIUS),
        })
    }

    pub fn with_reference_radius(mut self, rho_ref: T) -> Result<Self> {
        if !(rho_ref > T::zero()) {
            return Err(Error::ZeroRadius);
        }
        self.reference_radius = rho_ref;
        Ok(self)
    }

    /// Logarithmic decay constant `C2`, K.
    pub fn decay(&self) -> T {
        self.power / (T::PI() * self.kappa * self.wire_length)
    }

    pub fn at(&self, rho: T) -> Result<T> {
        if !(rho > T::zero()) {
            return Err(Error::ZeroRadius);
        }
        Ok(self.base_temperature + self.decay() * (self.reference_radius / rho).ln())
    }
}

/// Temperature at distance `rho` from the wire, referenced to `t0` at
/// [`DEFAULT_REFERENCE_RADIUS`].
pub fn log_temperature<T: Real>(
    power: T,
    rho: T,
    geom: &ShifterGeometry<T>,
    mat: &MaterialParams<T>,
    t0: T,
) -> Result<T> {
    LogTemperature::new(power, geom, mat, t0)?.at(rho)
}

/// Phase difference between the arms accumulated over the straight segments
/// for the logarithmic temperature profile, `(2 pi / lambda) n_T L_arm (T(rho2) - T(rho1))`.
pub fn phase_from_log_profile<T: Real>(
    power: T,
    geom: &ShifterGeometry<T>,
    mat: &MaterialParams<T>,
) -> Result<T> {
    let model = LogTemperature::new(power, geom, mat, T::zero())?;
    let dt = model.at(geom.rho2)? - model.at(geom.rho1)?;
    Ok(T::TAU() / mat.wavelength * mat.thermo_optic * geom.arm_length * dt)
}
