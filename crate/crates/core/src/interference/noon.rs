//! Two-photon fringes of the `|1,1>` input scanned through the heater powers.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::thermal::{phase_from_powers, CrosstalkModel};
use crate::unitary::Unitary;

use super::mzi::{mzi_unitary, MziParams};
use super::pairs::{pair_probability, PairOutput, PhotonPairModel};

/// Couplers of the scanned interferometer and the detection of events
/// with both photons in one port.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoonSetup<T> {
    pub eta1: T,
    pub eta2: T,
    /// Relative efficiency of the `(2,0)` and `(0,2)` channels: a
    /// balanced fibre splitter on the output port detects half the pairs.
    pub bunched_efficiency: T,
}

impl<T: Real> Default for NoonSetup<T> {
    fn default() -> Self {
        Self {
            eta1: T::half(),
            eta2: T::half(),
            bunched_efficiency: T::half(),
        }
    }
}

/// Detected two-fold rates per power setting, in units of the pair rate.
#[derive(Clone, Debug, PartialEq)]
pub struct NoonCurves<T> {
    /// Total dissipated power of each setting, W.
    pub control: Vec<T>,
    pub phi: Vec<T>,
    pub p11: Vec<T>,
    pub p02: Vec<T>,
    pub p20: Vec<T>,
}

impl<T: Real> NoonCurves<T> {
    pub fn len(&self) -> usize {
        self.control.len()
    }

    pub fn is_empty(&self) -> bool {
        self.control.is_empty()
    }
}

pub fn noon_fringes<T: Real>(
    model: &CrosstalkModel<T>,
    powers: &[Vec<T>],
    pair: &PhotonPairModel<T>,
    setup: &NoonSetup<T>,
) -> Result<NoonCurves<T>> {
    pair.validate()?;
    if powers.is_empty() {
        return Err(Error::DimensionMismatch {
            what: "power grid points",
            expected: 1,
            found: 0,
        });
    }
    if !(setup.bunched_efficiency >= T::zero() && setup.bunched_efficiency <= T::one()) {
        return Err(Error::invalid("bunched_efficiency", "must lie in [0, 1]"));
    }
    let mut curves = NoonCurves {
        control: Vec::with_capacity(powers.len()),
        phi: Vec::with_capacity(powers.len()),
        p11: Vec::with_capacity(powers.len()),
        p02: Vec::with_capacity(powers.len()),
        p20: Vec::with_capacity(powers.len()),
    };
    let floor = pair.accidental_rate;
    for p in powers {
        let phi = phase_from_powers(model, p)?;
        let u = mzi_unitary(&MziParams {
            eta1: setup.eta1,
            eta2: setup.eta2,
            phi,
        })?;
        let prob = |o: PairOutput| pair_probability(&u, (0, 1), o, pair);
        curves.control.push(p.iter().copied().sum());
        curves.phi.push(phi);
        curves.p11.push(prob(PairOutput(0, 1))? + floor);
        curves.p20.push(setup.bunched_efficiency * prob(PairOutput(0, 0))? + floor);
        curves.p02.push(setup.bunched_efficiency * prob(PairOutput(1, 1))? + floor);
    }
    Ok(curves)
}

/// Single-heater scan of `points` evenly spaced powers on `[from, to]`.
pub fn power_grid<T: Real>(heaters: usize, heater: usize, from: T, to: T, points: usize) -> Result<Vec<Vec<T>>> {
    if heater >= heaters {
        return Err(Error::DimensionMismatch {
            what: "heater index",
            expected: heaters,
            found: heater + 1,
        });
    }
    if points < 2 || !(to > from) || from < T::zero() {
        return Err(Error::invalid("grid", "need >= 2 points on an increasing non-negative range"));
    }
    let step = (to - from) / T::from_usize_lossy(points - 1);
    Ok((0..points)
        .map(|k| {
            let mut p = vec![T::zero(); heaters];
            p[heater] = from + step * T::from_usize_lossy(k);
            p
        })
        .collect())
}

/// Intensity correlations for two equal, phase-randomised coherent beams
/// on the two inputs: the classical analogue of the `|1,1>` experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalCorrelations<T> {
    /// `<I_1 I_2>`.
    pub c11: T,
    /// `<I_1^2> / 2`, detected through a balanced splitter.
    pub c20: T,
    /// `<I_2^2> / 2`.
    pub c02: T,
}

pub fn coherent_pair_correlations<T: Real>(u: &Unitary<T>) -> Result<ClassicalCorrelations<T>> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            what: "modes",
            expected: 2,
            found: u.dim(),
        });
    }
    // I_k = S_k + 2 Re(z_k e^{i theta}); averaging over theta leaves
    // <I_k I_l> = S_k S_l + 2 Re(z_k conj(z_l)).
    let s = |k: usize| u.get(k, 0).norm_sqr() + u.get(k, 1).norm_sqr();
    let z = |k: usize| u.get(k, 0).conj() * u.get(k, 1);
    let corr = |k: usize, l: usize| s(k) * s(l) + T::two() * (z(k) * z(l).conj()).re;
    Ok(ClassicalCorrelations {
        c11: corr(0, 1),
        c20: corr(0, 0) * T::half(),
        c02: corr(1, 1) * T::half(),
    })
}
