use crate::counts::CountRecord;
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::power::{voltage_to_power, Dissipation, ResistorSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlUnit {
    Volts,
    Watts,
}

impl ControlUnit {
    pub fn symbol(self) -> &'static str {
        match self {
            ControlUnit::Volts => "V",
            ControlUnit::Watts => "W",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "V" | "v" | "volt" | "volts" => Some(ControlUnit::Volts),
            "W" | "w" | "watt" | "watts" => Some(ControlUnit::Watts),
            _ => None,
        }
    }
}

/// Residual weights of a fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    /// `1 / N` per sample: photon counts.
    Poisson,
    /// Power-meter readings.
    Uniform,
}

/// A scan of one heater control value with the readings of one or both
/// interferometer outputs. `outputs[0]` follows `(1 + V cos phi) / 2`,
/// `outputs[1]` (if present) is its complement.
///
/// Readings are photon counts or power-meter values; the latter may dip
/// below zero after offset subtraction, so they are kept as plain reals
/// next to the accidental estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeScan<T> {
    pub control: Vec<T>,
    pub unit: ControlUnit,
    pub outputs: Vec<Vec<T>>,
    /// Accidental estimate per reading, zero when not measured.
    pub accidentals: Vec<Vec<T>>,
    pub label: String,
}

impl<T: Real> FringeScan<T> {
    /// Scan from count records, one vector per output.
    pub fn from_records(control: Vec<T>, unit: ControlUnit, records: Vec<Vec<CountRecord<T>>>, label: impl Into<String>) -> Result<Self> {
        let outputs = records.iter().map(|o| o.iter().map(|r| r.raw).collect()).collect();
        let accidentals = records.iter().map(|o| o.iter().map(|r| r.accidental).collect()).collect();
        Self::with_accidentals(control, unit, outputs, accidentals, label)
    }

    /// Scan of raw readings without accidental estimates.
    pub fn from_values(control: Vec<T>, unit: ControlUnit, outputs: Vec<Vec<T>>, label: impl Into<String>) -> Result<Self> {
        let accidentals = outputs.iter().map(|o| vec![T::zero(); o.len()]).collect();
        Self::with_accidentals(control, unit, outputs, accidentals, label)
    }

    pub fn with_accidentals(
        control: Vec<T>,
        unit: ControlUnit,
        outputs: Vec<Vec<T>>,
        accidentals: Vec<Vec<T>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if outputs.is_empty() || outputs.len() > 2 {
            return Err(Error::DimensionMismatch {
                what: "scan outputs",
                expected: 2,
                found: outputs.len(),
            });
        }
        if accidentals.len() != outputs.len() {
            return Err(Error::DimensionMismatch {
                what: "accidental columns",
                expected: outputs.len(),
                found: accidentals.len(),
            });
        }
        for out in outputs.iter().chain(&accidentals) {
            if out.len() != control.len() {
                return Err(Error::DimensionMismatch {
                    what: "scan samples per output",
                    expected: control.len(),
                    found: out.len(),
                });
            }
        }
        if control.iter().chain(outputs.iter().flatten()).any(|c| !c.is_finite()) {
            return Err(Error::invalid("readings", "values must be finite"));
        }
        if let Some(a) = accidentals.iter().flatten().find(|a| !(**a >= T::zero())) {
            return Err(Error::NegativeCount(a.to_f64_lossy()));
        }
        let increasing = control.windows(2).all(|w| w[1] > w[0]);
        let decreasing = control.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::invalid("control", "values must be strictly monotonic"));
        }
        Ok(Self {
            control,
            unit,
            outputs,
            accidentals,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.control.len()
    }

    pub fn is_empty(&self) -> bool {
        self.control.is_empty()
    }

    /// Dissipated power of every sample, converting voltages with `spec`.
    pub fn powers(&self, spec: &ResistorSpec<T>, convention: Dissipation) -> Result<Vec<T>> {
        match self.unit {
            ControlUnit::Watts => Ok(self.control.clone()),
            ControlUnit::Volts => self.control.iter().map(|&v| voltage_to_power(v, spec, convention)).collect(),
        }
    }

    /// Readings above one are taken as photon counts, normalised intensities
    /// and power-meter values otherwise.
    pub fn weighting(&self) -> Weighting {
        if self.outputs.iter().flatten().any(|r| *r > T::one()) {
            Weighting::Poisson
        } else {
            Weighting::Uniform
        }
    }

    pub fn has_accidentals(&self) -> bool {
        self.accidentals.iter().flatten().any(|a| *a > T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = FringeScan::from_values(vec![0.0, 1.0, 2.0], ControlUnit::Watts, vec![vec![0.1, 0.2, 0.3]], "1->1");
        assert!(ok.is_ok());
        assert!(FringeScan::from_values(vec![0.0, 1.0, 1.0], ControlUnit::Watts, vec![vec![0.0; 3]], "").is_err());
        assert!(FringeScan::from_values(vec![0.0, 1.0], ControlUnit::Watts, vec![vec![0.0; 3]], "").is_err());
        assert!(FringeScan::<f64>::from_values(vec![0.0], ControlUnit::Watts, vec![], "").is_err());
        assert!(FringeScan::from_values(vec![2.0, 1.0], ControlUnit::Watts, vec![vec![0.0; 2]], "").is_ok());
    }

    #[test]
    fn volts_become_watts() {
        let s = FringeScan::from_values(vec![0.0, 2.0], ControlUnit::Volts, vec![vec![100.0, 50.0]], "").unwrap();
        let p = s.powers(&ResistorSpec::nominal(), Dissipation::Series).unwrap();
        assert_eq!(p, vec![0.0, 0.05]);
        assert_eq!(s.weighting(), Weighting::Poisson);
        assert_eq!(ControlUnit::parse("W"), Some(ControlUnit::Watts));
        assert!(!s.has_accidentals());
        let rec = vec![vec![CountRecord::new(100.0, 3.0, 1.0).unwrap(), CountRecord::new(50.0, 2.0, 1.0).unwrap()]];
        let c = FringeScan::from_records(vec![0.0, 1.0], ControlUnit::Watts, rec, "").unwrap();
        assert!(c.has_accidentals() && c.accidentals[0][1] == 2.0);
    }
}
