//! Device description read from a TOML file.
//!
//! ```toml
//! [material]
//! kappa = 0.9                # W m^-1 K^-1
//! thermo_optic = 1e-5        # K^-1
//! wavelength = "1.55 um"
//!
//! [couplers]
//! eta1 = 0.5
//! eta2 = 0.5
//!
//! [[heaters]]
//! rho1 = "5.011 mm"          # heater to arm 1
//! rho2 = "1 mm"              # heater to arm 2
//! arm_length = "12 mm"
//! wire_length = "20 mm"
//! width = "300 um"
//! position = "3 mm"          # lateral position on the thermal cross-section
//! resistance = "67 ohm"
//! lead_resistance = "13 ohm"
//!
//! [crosstalk]                # optional; predicted from the geometry if absent
//! phi0 = 0.837
//! alphas = [13.43]           # rad/W, one per heater
//! ```
//!
//! Optional `[photons]` (`overlap`, `sigma_t` or `bandpass`,
//! `accidental_rate`), `[chip]` (`width`, `depth`, `nx`, `ny`,
//! `base_temperature`) and `[dynamics]` (`rise_time`) sections complete
//! the simulation inputs. Bare numbers are SI base units.

use std::path::Path;

use mzi_core::calibration::{DeviceModel, Dissipation, ResistorSpec};
use mzi_core::interference::PhotonPairModel;
use mzi_core::thermal::{predict_alpha, CrosstalkModel, HeatGrid, MaterialParams, ShifterGeometry};
use serde::Deserialize;

use crate::error::CliError;
use crate::units::{Dimension, Quantity};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    material: RawMaterial,
    #[serde(default)]
    couplers: RawCouplers,
    #[serde(default)]
    heaters: Vec<RawHeater>,
    crosstalk: Option<RawCrosstalk>,
    #[serde(default)]
    photons: RawPhotons,
    #[serde(default)]
    chip: RawChip,
    #[serde(default)]
    dynamics: RawDynamics,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    kappa: Option<f64>,
    thermo_optic: Option<f64>,
    wavelength: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCouplers {
    eta1: Option<f64>,
    eta2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHeater {
    rho1: Option<Quantity>,
    rho2: Option<Quantity>,
    arm_length: Option<Quantity>,
    wire_length: Option<Quantity>,
    width: Option<Quantity>,
    position: Option<Quantity>,
    resistance: Option<Quantity>,
    lead_resistance: Option<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrosstalk {
    phi0: Option<Quantity>,
    alphas: Vec<f64>,
    dissipation: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhotons {
    overlap: Option<f64>,
    sigma_t: Option<Quantity>,
    bandpass: Option<Quantity>,
    accidental_rate: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChip {
    width: Option<Quantity>,
    depth: Option<Quantity>,
    nx: Option<usize>,
    ny: Option<usize>,
    base_temperature: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDynamics {
    rise_time: Option<Quantity>,
}

#[derive(Clone, Debug)]
pub struct HeaterConfig {
    pub geometry: ShifterGeometry<f64>,
    pub width: f64,
    pub position: f64,
    pub resistor: ResistorSpec<f64>,
}

/// Validated device and simulation settings, SI units throughout.
#[derive(Clone, Debug)]
pub struct DeviceConfig {
    pub material: MaterialParams<f64>,
    pub eta1: f64,
    pub eta2: f64,
    pub heaters: Vec<HeaterConfig>,
    pub crosstalk: CrosstalkModel<f64>,
    /// Whether `crosstalk` came from the file or from the geometry.
    pub crosstalk_measured: bool,
    pub dissipation: Dissipation,
    pub photons: PhotonPairModel<f64>,
    pub chip: HeatGrid<f64>,
    pub rise_time: f64,
}

fn get(q: Option<Quantity>, default: f64, dim: Dimension, field: &str) -> Result<f64, CliError> {
    let v = match q {
        Some(q) => q.to_si(dim, field).map_err(CliError::Data)?,
        None => default,
    };
    if !v.is_finite() {
        return Err(CliError::Data(format!("`{field}` must be finite")));
    }
    Ok(v)
}

impl DeviceConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Data(format!("config: {}", e.message())))?;
        Self::from_raw(raw)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// One heater with the published device constants.
    pub fn builtin() -> Self {
        Self::from_raw(RawConfig::default()).expect("defaults are valid")
    }

    fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let base = MaterialParams::<f64>::borosilicate_1550();
        let material = MaterialParams {
            kappa: raw.material.kappa.unwrap_or(base.kappa),
            thermo_optic: raw.material.thermo_optic.unwrap_or(base.thermo_optic),
            wavelength: get(raw.material.wavelength, base.wavelength, Dimension::Length, "material.wavelength")?,
        };
        material.validate().map_err(|e| CliError::Data(format!("material: {e}")))?;
        let eta1 = raw.couplers.eta1.unwrap_or(0.5);
        let eta2 = raw.couplers.eta2.unwrap_or(0.5);
        for (name, eta) in [("couplers.eta1", eta1), ("couplers.eta2", eta2)] {
            if !(0.0..=1.0).contains(&eta) {
                return Err(CliError::Data(format!("`{name}` must lie in [0, 1], got {eta}")));
            }
        }

        let raw_heaters = if raw.heaters.is_empty() { vec![RawHeater::default()] } else { raw.heaters };
        let chip_width = get(raw.chip.width, 6e-3, Dimension::Length, "chip.width")?;
        let mut heaters = Vec::with_capacity(raw_heaters.len());
        for (i, h) in raw_heaters.into_iter().enumerate() {
            let f = |name: &str| format!("heaters[{i}].{name}");
            let nominal = ShifterGeometry::from_log_ratio(1.6117, 12e-3, 20e-3);
            let geometry = ShifterGeometry {
                rho1: get(h.rho1, nominal.rho1, Dimension::Length, &f("rho1"))?,
                rho2: get(h.rho2, nominal.rho2, Dimension::Length, &f("rho2"))?,
                arm_length: get(h.arm_length, nominal.arm_length, Dimension::Length, &f("arm_length"))?,
                wire_length: get(h.wire_length, nominal.wire_length, Dimension::Length, &f("wire_length"))?,
            };
            geometry.validate().map_err(|e| CliError::Data(format!("heaters[{i}]: {e}")))?;
            let resistor = ResistorSpec {
                heater: get(h.resistance, 67.0, Dimension::Resistance, &f("resistance"))?,
                leads: get(h.lead_resistance, 13.0, Dimension::Resistance, &f("lead_resistance"))?,
            };
            resistor.validate().map_err(|e| CliError::Data(format!("heaters[{i}]: {e}")))?;
            let width = get(h.width, 300e-6, Dimension::Length, &f("width"))?;
            let position = get(h.position, chip_width / 2.0, Dimension::Length, &f("position"))?;
            if !(width > 0.0) || position - width / 2.0 < 0.0 || position + width / 2.0 > chip_width {
                return Err(CliError::Data(format!("`{}` puts the heater outside the chip", f("position"))));
            }
            heaters.push(HeaterConfig {
                geometry,
                width,
                position,
                resistor,
            });
        }

        let (crosstalk, crosstalk_measured, dissipation) = match raw.crosstalk {
            Some(c) => {
                if c.alphas.len() != heaters.len() {
                    return Err(CliError::Data(format!(
                        "`crosstalk.alphas` has {} entries for {} heaters",
                        c.alphas.len(),
                        heaters.len()
                    )));
                }
                let phi0 = get(c.phi0, 0.0, Dimension::Angle, "crosstalk.phi0")?;
                let dissipation = match c.dissipation.as_deref() {
                    None | Some("series") => Dissipation::Series,
                    Some("heater") => Dissipation::HeaterOnly,
                    Some(other) => {
                        return Err(CliError::Data(format!(
                            "`crosstalk.dissipation` must be \"series\" or \"heater\", got {other:?}"
                        )))
                    }
                };
                let model = CrosstalkModel::new(phi0, c.alphas).map_err(|e| CliError::Data(format!("crosstalk: {e}")))?;
                (model, true, dissipation)
            }
            None => {
                let alphas = heaters
                    .iter()
                    .map(|h| predict_alpha(&h.geometry, &material))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Data(format!("heaters: {e}")))?;
                (CrosstalkModel::new(0.0, alphas).expect("finite"), false, Dissipation::Series)
            }
        };

        let sigma_t = match (raw.photons.sigma_t, raw.photons.bandpass) {
            (Some(_), Some(_)) => {
                return Err(CliError::Data("give either `photons.sigma_t` or `photons.bandpass`, not both".into()))
            }
            (Some(s), None) => get(Some(s), 0.0, Dimension::Time, "photons.sigma_t")?,
            (None, Some(b)) => {
                let fwhm = get(Some(b), 0.0, Dimension::Length, "photons.bandpass")?;
                if !(fwhm > 0.0) {
                    return Err(CliError::Data("`photons.bandpass` must be > 0".into()));
                }
                PhotonPairModel::sigma_t_for_bandpass(material.wavelength, fwhm)
            }
            (None, None) => PhotonPairModel::<f64>::ideal().sigma_t,
        };
        let photons = PhotonPairModel {
            overlap: raw.photons.overlap.unwrap_or(1.0),
            sigma_t,
            tau: 0.0,
            accidental_rate: raw.photons.accidental_rate.unwrap_or(0.0),
        };
        photons.validate().map_err(|e| CliError::Data(format!("photons: {e}")))?;

        let mut chip = HeatGrid::chip(raw.chip.nx.unwrap_or(301), raw.chip.ny.unwrap_or(101));
        chip.width = chip_width;
        chip.depth = get(raw.chip.depth, chip.depth, Dimension::Length, "chip.depth")?;
        chip.kappa = material.kappa;
        chip.base_temperature = get(raw.chip.base_temperature, chip.base_temperature, Dimension::Temperature, "chip.base_temperature")?;
        if let Some(h) = heaters.first() {
            chip.wire_length = h.geometry.wire_length;
        }
        chip.validate().map_err(|e| CliError::Data(format!("chip: {e}")))?;

        let rise_time = get(raw.dynamics.rise_time, 0.9, Dimension::Time, "dynamics.rise_time")?;
        if !(rise_time > 0.0) {
            return Err(CliError::Data("`dynamics.rise_time` must be > 0".into()));
        }

        Ok(Self {
            material,
            eta1,
            eta2,
            heaters,
            crosstalk,
            crosstalk_measured,
            dissipation,
            photons,
            chip,
            rise_time,
        })
    }

    pub fn heater(&self, index: usize) -> Result<&HeaterConfig, CliError> {
        self.heaters.get(index).ok_or_else(|| {
            CliError::Usage(format!("--heater {index} is out of range: the config has {} heater(s)", self.heaters.len()))
        })
    }

    pub fn device(&self) -> Result<DeviceModel<f64>, CliError> {
        Ok(DeviceModel::new(
            self.eta1,
            self.eta2,
            self.crosstalk.clone(),
            self.heaters.iter().map(|h| h.resistor).collect(),
            self.dissipation,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_device() {
        let c = DeviceConfig::builtin();
        assert_eq!(c.heaters.len(), 1);
        assert!(!c.crosstalk_measured);
        assert!((c.crosstalk.alphas[0] - 8.602150537634408 * 1.6117).abs() < 1e-9);
        assert_eq!(c.heaters[0].position, 3e-3);
    }

    #[test]
    fn suffixed_values_and_measured_crosstalk() {
        let c = DeviceConfig::from_toml(
            r#"
            [material]
            wavelength = "1550 nm"
            [[heaters]]
            width = "300 um"
            rho1 = "2 mm"
            [[heaters]]
            position = "4.5 mm"
            [crosstalk]
            phi0 = -0.17
            alphas = [13.16, -8.77]
            [photons]
            bandpass = "8.8 nm"
            "#,
        )
        .unwrap();
        assert_eq!(c.heaters.len(), 2);
        assert!((c.material.wavelength - 1.55e-6).abs() < 1e-18);
        assert_eq!(c.heaters[0].geometry.rho1, 2e-3);
        assert_eq!(c.crosstalk.alphas, vec![13.16, -8.77]);
        assert!((c.photons.sigma_t - 0.24e-12).abs() < 0.02e-12);
    }

    #[test]
    fn errors_name_the_field() {
        let e = DeviceConfig::from_toml("[[heaters]]\nwidth = \"3 ps\"\n").unwrap_err();
        assert!(e.to_string().contains("heaters[0].width"), "{e}");
        let e = DeviceConfig::from_toml("[crosstalk]\nalphas = [1.0, 2.0]\n").unwrap_err();
        assert!(e.to_string().contains("crosstalk.alphas"), "{e}");
        let e = DeviceConfig::from_toml("[couplers]\neta1 = 1.5\n").unwrap_err();
        assert!(e.to_string().contains("couplers.eta1"), "{e}");
        assert!(DeviceConfig::from_toml("[material]\ncolour = 1\n").is_err());
    }
}
