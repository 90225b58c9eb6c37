//! Inverse problems on measured scans: power conversion, fringe fitting,
//! cross-talk planes, phase unwrapping and drift.

mod fringe;
mod phase;
mod plane;
mod power;
mod scan;

pub use fringe::{fit_fringe, fit_fringe_with, quadratic_phase_term, FitOptions, FitResult, QuadraticTerm, ALPHA_SEARCH_MAX};
pub use phase::{stability_metric, unwrap_phase, Stability};
pub use plane::{fit_crosstalk_plane, PlaneFit, PlaneSample};
pub use power::{voltage_to_power, DeviceModel, Dissipation, ResistorSpec};
pub use scan::{ControlUnit, FringeScan, Weighting};
