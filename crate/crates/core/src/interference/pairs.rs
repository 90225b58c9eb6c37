use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::unitary::Unitary;

/// Phenomenological photon-pair source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonPairModel<T> {
    /// Mode overlap `x` of the two photons at zero delay.
    pub overlap: T,
    /// Coherence-time scale of the Gaussian delay envelope, s.
    pub sigma_t: T,
    /// Relative delay between the photons, s.
    pub tau: T,
    /// Accidental coincidences added to every two-fold channel, in units of
    /// the detected pair probability.
    pub accidental_rate: T,
}

impl<T: Real> PhotonPairModel<T> {
    /// Perfectly indistinguishable pair at zero delay with a 0.25 ps envelope.
    pub fn ideal() -> Self {
        Self {
            overlap: T::one(),
            sigma_t: T::lit(0.25e-12),
            tau: T::zero(),
            accidental_rate: T::zero(),
        }
    }

    pub fn with_overlap(self, overlap: T) -> Self {
        Self { overlap, ..self }
    }

    pub fn with_delay(self, tau: T) -> Self {
        Self { tau, ..self }
    }

    pub fn with_accidentals(self, accidental_rate: T) -> Self {
        Self {
            accidental_rate,
            ..self
        }
    }

    /// Envelope of photons filtered by a Gaussian bandpass of full width at
    /// half maximum `fwhm` centred at `wavelength`: the two-photon overlap
    /// falls as `exp(-sigma_w^2 tau^2)`, so `sigma_t = 1 / (sqrt 2 sigma_w)`.
    pub fn sigma_t_for_bandpass(wavelength: T, fwhm: T) -> T {
        let c = T::lit(299_792_458.0);
        let d_nu = c * fwhm / (wavelength * wavelength);
        let sigma_w = T::TAU() * d_nu / (T::lit(8.0) * T::LN_2()).sqrt();
        T::one() / (T::SQRT_2() * sigma_w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.overlap >= T::zero() && self.overlap <= T::one()) {
            return Err(Error::invalid("overlap", format!("must lie in [0, 1], got {}", self.overlap)));
        }
        if !(self.sigma_t > T::zero() && self.sigma_t.is_finite()) {
            return Err(Error::invalid("sigma_t", "must be > 0"));
        }
        if !self.tau.is_finite() {
            return Err(Error::invalid("tau", "must be finite"));
        }
        if !(self.accidental_rate >= T::zero()) {
            return Err(Error::invalid("accidental_rate", "must be >= 0"));
        }
        Ok(())
    }

    /// Effective indistinguishability `x exp(-tau^2 / 2 sigma_t^2)`.
    pub fn indistinguishability(&self) -> T {
        self.overlap * (-(self.tau * self.tau) / (T::two() * self.sigma_t * self.sigma_t)).exp()
    }
}

impl<T: Real> Default for PhotonPairModel<T> {
    fn default() -> Self {
        Self::ideal()
    }
}

/// Output modes of a two-photon detection event, `first <= second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairOutput(pub usize, pub usize);

impl PairOutput {
    fn sorted(self) -> (usize, usize) {
        (self.0.min(self.1), self.0.max(self.1))
    }
}

/// Probability of a two-photon event at `outputs` for one photon in each
/// of the distinct `inputs`: perfectly indistinguishable photons (first)
/// and fully distinguishable ones (second).
pub fn pair_probability_limits<T: Real>(
    u: &Unitary<T>,
    inputs: (usize, usize),
    outputs: PairOutput,
) -> Result<(T, T)> {
    let (a, b) = inputs;
    let (k, l) = outputs.sorted();
    let n = u.dim();
    if a == b || a >= n || b >= n || l >= n {
        return Err(Error::invalid("modes", format!("inputs {inputs:?} / outputs {outputs:?} invalid for dim {n}")));
    }
    let (uka, ukb, ula, ulb) = (u.get(k, a), u.get(k, b), u.get(l, a), u.get(l, b));
    if k == l {
        let indist = T::two() * (uka * ukb).norm_sqr();
        Ok((indist, uka.norm_sqr() * ukb.norm_sqr()))
    } else {
        let indist = (uka * ulb + ukb * ula).norm_sqr();
        let dist = uka.norm_sqr() * ulb.norm_sqr() + ukb.norm_sqr() * ula.norm_sqr();
        Ok((indist, dist))
    }
}

/// Mixture `I P_indist + (1 - I) P_dist` with `I` the pair's effective
/// indistinguishability.
pub fn pair_probability<T: Real>(
    u: &Unitary<T>,
    inputs: (usize, usize),
    outputs: PairOutput,
    pair: &PhotonPairModel<T>,
) -> Result<T> {
    pair.validate()?;
    let (indist, dist) = pair_probability_limits(u, inputs, outputs)?;
    let i = pair.indistinguishability();
    Ok(i * indist + (T::one() - i) * dist)
}

/// Coincidence probability `P(1,1)` for the `|1,1>` input of a two-mode device.
pub fn hom_coincidence<T: Real>(u: &Unitary<T>, pair: &PhotonPairModel<T>) -> Result<T> {
    pair_probability(u, (0, 1), PairOutput(0, 1), pair)
}

/// `(N_clas - N_quan) / N_clas` for one output pattern, with `N_clas` the
/// distinguishable-photon rate. Zero when that rate vanishes.
pub fn hom_visibility<T: Real>(
    u: &Unitary<T>,
    inputs: (usize, usize),
    outputs: PairOutput,
    pair: &PhotonPairModel<T>,
) -> Result<T> {
    let (_, dist) = pair_probability_limits(u, inputs, outputs)?;
    let p = pair_probability(u, inputs, outputs, pair)?;
    if dist <= T::epsilon() {
        return Ok(T::zero());
    }
    Ok((dist - p) / dist)
}
