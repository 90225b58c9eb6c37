use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::interference::{hom_visibility, pair_probability, pair_probability_limits, PairOutput, PhotonPairModel};
use crate::scalar::Real;
use crate::unitary::Unitary;

use super::dataset::{HomVisibility, TomographyDataset};

/// Statistics of a simulated measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shots {
    /// Exact probabilities.
    Analytic,
    /// Poisson counts with this mean number of events per input setting.
    Poisson(f64),
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    if mean <= 0.0 {
        0.0
    } else {
        Poisson::new(mean).map(|d| d.sample(rng)).unwrap_or(mean)
    }
}

/// Singles for every input and HOM visibilities for every pair of inputs
/// and pair of distinct outputs.
pub fn simulate_dataset<T: Real, R: Rng + ?Sized>(
    u: &Unitary<T>,
    shots: Shots,
    pair: &PhotonPairModel<T>,
    rng: &mut R,
) -> Result<TomographyDataset<T>> {
    pair.validate()?;
    if let Shots::Poisson(n) = shots {
        if !(n > 0.0) {
            return Err(Error::invalid("shots", "must be > 0"));
        }
    }
    let n = u.dim();
    let mut singles = vec![vec![T::zero(); n]; n];
    let mut sigma = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        match shots {
            Shots::Analytic => {
                for j in 0..n {
                    singles[i][j] = u.get(j, i).norm_sqr();
                }
            }
            Shots::Poisson(total) => {
                let counts: Vec<f64> = (0..n).map(|j| poisson(total * u.get(j, i).norm_sqr().to_f64_lossy(), rng)).collect();
                let sum = counts.iter().sum::<f64>().max(1.0);
                for j in 0..n {
                    singles[i][j] = T::lit(counts[j] / sum);
                    sigma[i][j] = T::lit(counts[j].sqrt() / sum);
                }
            }
        }
    }
    let mut visibilities = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    let out = PairOutput(k, l);
                    let (value, err) = match shots {
                        Shots::Analytic => (hom_visibility(u, (a, b), out, pair)?, T::zero()),
                        Shots::Poisson(total) => {
                            let (_, dist) = pair_probability_limits(u, (a, b), out)?;
                            let mixed = pair_probability(u, (a, b), out, pair)?;
                            let nc = poisson(total * dist.to_f64_lossy(), rng);
                            let nq = poisson(total * mixed.to_f64_lossy(), rng);
                            if nc > 0.0 {
                                let v = (1.0 - nq / nc).clamp(-1.0, 1.0);
                                let var = nq / (nc * nc) + nq * nq / (nc * nc * nc);
                                (T::lit(v), T::lit(var.sqrt()))
                            } else {
                                (T::zero(), T::one())
                            }
                        }
                    };
                    visibilities.push(HomVisibility {
                        inputs: (a, b),
                        outputs: (k, l),
                        value,
                        sigma: err,
                    });
                }
            }
        }
    }
    TomographyDataset::new(singles, Some(sigma), visibilities, pair.indistinguishability())
}
