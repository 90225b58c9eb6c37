use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::scalar::Real;
use crate::unitary::Unitary;

use super::permanent::permanent;

/// Largest photon number [`evolve_fock`] accepts.
pub const MAX_PHOTONS: usize = 8;

/// Probabilities of every output occupation pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputDistribution<T> {
    probabilities: BTreeMap<FockState, T>,
}

impl<T: Real> OutputDistribution<T> {
    /// Wraps a table whose entries are non-negative and sum to one within `tol`.
    pub fn new(probabilities: BTreeMap<FockState, T>, tol: T) -> Result<Self> {
        if let Some(p) = probabilities.values().find(|p| !(**p >= T::zero())) {
            return Err(Error::invalid("probabilities", format!("negative entry {p}")));
        }
        let total: T = probabilities.values().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::invalid("probabilities", format!("sum to {total}, not 1")));
        }
        Ok(Self { probabilities })
    }

    /// Zero for patterns not in the table.
    pub fn probability(&self, state: &FockState) -> T {
        self.probabilities.get(state).copied().unwrap_or_else(T::zero)
    }

    pub fn of(&self, occupations: &[usize]) -> T {
        self.probability(&FockState::from_slice(occupations))
    }

    pub fn total(&self) -> T {
        self.probabilities.values().copied().sum()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, T)> {
        self.probabilities.iter().map(|(s, p)| (s, *p))
    }

    /// Probability of finding exactly `photons` photons in `mode`.
    pub fn marginal(&self, mode: usize, photons: usize) -> T {
        self.iter()
            .filter(|(s, _)| s.occupations().get(mode) == Some(&photons))
            .map(|(_, p)| p)
            .sum()
    }
}

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |f, k| f * T::from_usize_lossy(k))
}

/// Evolves indistinguishable photons in `input` through `u`.
///
/// The amplitude of output pattern `m` is `perm(U[m, n]) / sqrt(prod n_i! prod m_j!)`,
/// where `U[m, n]` repeats output row `j` `m_j` times and input column `i`
/// `n_i` times.
pub fn evolve_fock<T: Real>(u: &Unitary<T>, input: &FockState) -> Result<OutputDistribution<T>> {
    if input.modes() != u.dim() {
        return Err(Error::DimensionMismatch {
            what: "Fock state modes",
            expected: u.dim(),
            found: input.modes(),
        });
    }
    let n = input.total_photons();
    if n > MAX_PHOTONS {
        return Err(Error::PhotonOverflow {
            photons: n,
            max: MAX_PHOTONS,
        });
    }
    let cols = input.mode_list();
    let in_norm: T = input.occupations().iter().map(|&k| factorial::<T>(k)).fold(T::one(), |a, b| a * b);
    let mut table = BTreeMap::new();
    for out in FockState::all(u.dim(), n) {
        let rows = out.mode_list();
        let out_norm: T = out.occupations().iter().map(|&k| factorial::<T>(k)).fold(T::one(), |a, b| a * b);
        let amp = permanent(&u.matrix().select(&rows, &cols))?;
        table.insert(out, amp.norm_sqr() / (in_norm * out_norm));
    }
    OutputDistribution::new(table, T::lit(T::UNITARY_TOL) * T::lit(16.0))
}
