//! Photon statistics of the interferometer: unitary, classical and
//! multi-photon fringes, HOM and N00N observables, visibility estimators.

mod evolution;
mod mzi;
mod noon;
mod pairs;
mod permanent;
mod visibility;

pub use evolution::{evolve_fock, OutputDistribution, MAX_PHOTONS};
pub use mzi::{classical_fringe, mzi_unitary, MziParams};
pub use noon::{coherent_pair_correlations, noon_fringes, power_grid, ClassicalCorrelations, NoonCurves, NoonSetup};
pub use pairs::{
    hom_coincidence, hom_visibility, pair_probability, pair_probability_limits, PairOutput, PhotonPairModel,
};
pub use permanent::{permanent, MAX_PERMANENT_ORDER};
pub use visibility::{
    classical_bound_test, correct_accidentals, fit_sinusoid, fit_sinusoid_at, visibility_at_frequency,
    visibility_minmax, visibility_raw, BoundTest, Corrected, SinusoidFit, CLASSICAL_NOON_BOUND,
};
