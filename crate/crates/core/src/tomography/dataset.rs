use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(N_clas - N_quan) / N_clas` for one photon in each of `inputs`, detected
/// as a coincidence between `outputs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomVisibility<T> {
    pub inputs: (usize, usize),
    pub outputs: (usize, usize),
    pub value: T,
    /// Standard error, zero when not known.
    pub sigma: T,
}

/// Single-photon transition probabilities and two-photon visibilities of
/// one circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct TomographyDataset<T> {
    /// `singles[i][j] = P(output j | input i) = |U_ji|^2`.
    pub singles: Vec<Vec<T>>,
    pub singles_sigma: Vec<Vec<T>>,
    pub visibilities: Vec<HomVisibility<T>>,
    /// Pair indistinguishability the visibilities were taken with; they are
    /// divided by it before inversion.
    pub indistinguishability: T,
    /// Some singles row did not sum to one and was renormalised (uniform
    /// loss removed).
    pub loss_normalised: bool,
}

impl<T: Real> TomographyDataset<T> {
    pub fn new(
        singles: Vec<Vec<T>>,
        singles_sigma: Option<Vec<Vec<T>>>,
        visibilities: Vec<HomVisibility<T>>,
        indistinguishability: T,
    ) -> Result<Self> {
        let n = singles.len();
        if n < 2 {
            return Err(Error::IncompleteDataset(format!("{n} singles rows, need at least 2")));
        }
        if let Some(r) = singles.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "singles columns",
                expected: n,
                found: r.len(),
            });
        }
        let mut sigma = singles_sigma.unwrap_or_else(|| vec![vec![T::zero(); n]; n]);
        if sigma.len() != n || sigma.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                what: "singles uncertainty table",
                expected: n,
                found: sigma.len(),
            });
        }
        if let Some(p) = singles.iter().flatten().find(|p| !(**p >= T::zero()) || !p.is_finite()) {
            return Err(Error::invalid("singles", format!("probabilities must be finite and >= 0, got {p}")));
        }
        if !(indistinguishability > T::zero() && indistinguishability <= T::one()) {
            return Err(Error::invalid("indistinguishability", "must lie in (0, 1]"));
        }
        for v in &visibilities {
            let (a, b) = v.inputs;
            let (k, l) = v.outputs;
            if a == b || k == l || a.max(b).max(k).max(l) >= n {
                return Err(Error::invalid("visibilities", format!("bad mode indices {:?} -> {:?}", v.inputs, v.outputs)));
            }
            if !(v.value >= -T::one() && v.value <= T::one()) {
                return Err(Error::invalid("visibilities", format!("value {} outside [-1, 1]", v.value)));
            }
        }
        let mut singles = singles;
        let mut loss_normalised = false;
        let tol = T::lit(T::UNITARY_TOL).sqrt() * T::lit(0.1);
        for (row, srow) in singles.iter_mut().zip(&mut sigma) {
            let total: T = row.iter().copied().sum();
            if !(total > T::zero()) {
                return Err(Error::IncompleteDataset("a singles row has no counts".into()));
            }
            if (total - T::one()).abs() > tol {
                loss_normalised = true;
            }
            for (p, s) in row.iter_mut().zip(srow.iter_mut()) {
                *p /= total;
                *s /= total;
            }
        }
        Ok(Self {
            singles,
            singles_sigma: sigma,
            visibilities,
            indistinguishability,
            loss_normalised,
        })
    }

    pub fn dim(&self) -> usize {
        self.singles.len()
    }

    /// Visibility for the given (unordered) input and output pairs.
    pub fn visibility(&self, inputs: (usize, usize), outputs: (usize, usize)) -> Option<&HomVisibility<T>> {
        let key = |p: (usize, usize)| (p.0.min(p.1), p.0.max(p.1));
        self.visibilities
            .iter()
            .find(|v| key(v.inputs) == key(inputs) && key(v.outputs) == key(outputs))
    }
}
