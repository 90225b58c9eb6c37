//! Heater power to waveguide phase.

mod analytic;
mod compare;
mod crosstalk;
mod dynamics;
mod fd;

pub use analytic::{
    alpha_per_log_ratio, log_temperature, phase_from_log_profile, predict_alpha, LogTemperature,
    MaterialParams, ShifterGeometry, DEFAULT_REFERENCE_RADIUS,
};
pub use compare::{compare_with_log_model, LogComparison, Region};
pub use crosstalk::{phase_from_powers, CrosstalkModel};
pub use dynamics::{step_phase, StepResponse};
pub use fd::{
    solve_heat_fd, HeatGrid, Heater, HeaterDrive, SideBoundary, SolverOptions, TemperatureField,
};
