//! Models for thermally reconfigurable Mach-Zehnder interferometers on glass:
//! heater power to temperature and phase, the two-mode unitary, one- and
//! two-photon statistics, fringe and cross-talk calibration, and unitary
//! reconstruction from single-photon and HOM data.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the double-precision types used by the command line.

pub mod calibration;
pub mod counts;
pub mod error;
pub mod fock;
pub mod interference;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod optimize;
pub mod scalar;
pub mod thermal;
pub mod tomography;
pub mod unitary;

pub use error::{Error, Result};
pub use fock::FockState;
pub use matrix::CMatrix;
pub use scalar::Real;
pub use unitary::Unitary;

pub type Unitary64 = Unitary<f64>;
pub type Unitary32 = Unitary<f32>;
pub type CMatrix64 = CMatrix<f64>;
pub type MziParams64 = interference::MziParams<f64>;
pub type PhotonPairModel64 = interference::PhotonPairModel<f64>;
pub type FringeScan64 = calibration::FringeScan<f64>;
pub type FitResult64 = calibration::FitResult<f64>;
pub type TomographyDataset64 = tomography::TomographyDataset<f64>;
pub type HeatGrid64 = thermal::HeatGrid<f64>;
