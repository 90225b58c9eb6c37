use crate::error::{Error, Result};
use crate::interference::{mzi_unitary, MziParams};
use crate::scalar::Real;
use crate::thermal::{phase_from_powers, CrosstalkModel};
use crate::unitary::Unitary;

/// Resistances of one heater and its contact leads, ohm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResistorSpec<T> {
    pub heater: T,
    pub leads: T,
}

impl<T: Real> ResistorSpec<T> {
    /// 67 ohm heater with 13 ohm of plates.
    pub fn nominal() -> Self {
        Self {
            heater: T::lit(67.0),
            leads: T::lit(13.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.heater > T::zero()) || !(self.leads >= T::zero()) {
            return Err(Error::NonPositiveResistance);
        }
        Ok(())
    }

    pub fn effective(&self, convention: Dissipation) -> T {
        match convention {
            Dissipation::Series => self.heater + self.leads,
            Dissipation::HeaterOnly => self.heater,
        }
    }
}

impl<T: Real> Default for ResistorSpec<T> {
    fn default() -> Self {
        Self::nominal()
    }
}

/// Resistance used in `P = dV^2 / R`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dissipation {
    /// Heater plus leads.
    #[default]
    Series,
    /// Heater alone.
    HeaterOnly,
}

/// `dV^2 / R_eff`, W.
pub fn voltage_to_power<T: Real>(dv: T, spec: &ResistorSpec<T>, convention: Dissipation) -> Result<T> {
    spec.validate()?;
    if !(dv >= T::zero()) {
        return Err(Error::invalid("voltage", format!("must be >= 0, got {dv}")));
    }
    Ok(dv * dv / spec.effective(convention))
}

/// A calibrated interferometer with its heaters.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviceModel<T> {
    pub eta1: T,
    pub eta2: T,
    pub crosstalk: CrosstalkModel<T>,
    pub resistors: Vec<ResistorSpec<T>>,
    pub convention: Dissipation,
}

impl<T: Real> DeviceModel<T> {
    pub fn new(
        eta1: T,
        eta2: T,
        crosstalk: CrosstalkModel<T>,
        resistors: Vec<ResistorSpec<T>>,
        convention: Dissipation,
    ) -> Result<Self> {
        if resistors.len() != crosstalk.heaters() {
            return Err(Error::DimensionMismatch {
                what: "resistors per heater",
                expected: crosstalk.heaters(),
                found: resistors.len(),
            });
        }
        MziParams { eta1, eta2, phi: T::zero() }.validate()?;
        for r in &resistors {
            r.validate()?;
        }
        Ok(Self {
            eta1,
            eta2,
            crosstalk,
            resistors,
            convention,
        })
    }

    pub fn powers(&self, voltages: &[T]) -> Result<Vec<T>> {
        if voltages.len() != self.resistors.len() {
            return Err(Error::DimensionMismatch {
                what: "heater voltages",
                expected: self.resistors.len(),
                found: voltages.len(),
            });
        }
        voltages
            .iter()
            .zip(&self.resistors)
            .map(|(&v, r)| voltage_to_power(v, r, self.convention))
            .collect()
    }

    pub fn phase(&self, powers: &[T]) -> Result<T> {
        phase_from_powers(&self.crosstalk, powers)
    }

    pub fn unitary(&self, powers: &[T]) -> Result<Unitary<T>> {
        mzi_unitary(&MziParams {
            eta1: self.eta1,
            eta2: self.eta2,
            phi: self.phase(powers)?,
        })
    }
}
