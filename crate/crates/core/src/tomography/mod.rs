//! Reconstruction of a circuit unitary from single-photon probabilities and
//! two-photon HOM visibilities, and its comparison with theory.

mod dataset;
mod gauge;
mod reconstruct;
mod simulate;

pub use dataset::{HomVisibility, TomographyDataset};
pub use gauge::{gate_fidelity, gauge_fix, gauge_fixed_fidelity};
pub use reconstruct::{reconstruct, ReconstructedUnitary, MAX_TOMOGRAPHY_DIM, RESTARTS};
pub use simulate::{simulate_dataset, Shots};
