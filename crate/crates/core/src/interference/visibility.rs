//! Fringe visibility estimators and the classical two-photon bound.

use crate::counts::CountRecord;
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::scalar::Real;

/// Largest `(0,2)` N00N-fringe visibility reachable with classical light.
pub const CLASSICAL_NOON_BOUND: f64 = 1.0 / 3.0;

/// `offset + amplitude cos(frequency x + phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinusoidFit<T> {
    pub offset: T,
    pub amplitude: T,
    /// Angular frequency in radians per unit of the control variable.
    pub frequency: T,
    pub phase: T,
    pub rss: T,
}

impl<T: Real> SinusoidFit<T> {
    pub fn eval(&self, x: T) -> T {
        self.offset + self.amplitude * (self.frequency * x + self.phase).cos()
    }

    pub fn maximum(&self) -> T {
        self.offset + self.amplitude
    }

    /// Fitted minimum, floored at zero for count data.
    pub fn minimum(&self) -> T {
        (self.offset - self.amplitude).max(T::zero())
    }

    /// Control value of the first fitted maximum at or after `x0`.
    pub fn argmax_after(&self, x0: T) -> T {
        let period = T::TAU() / self.frequency;
        let k = ((self.frequency * x0 + self.phase) / T::TAU()).ceil();
        let x = (k * T::TAU() - self.phase) / self.frequency;
        if x - period >= x0 { x - period } else { x }
    }

    pub fn argmin_after(&self, x0: T) -> T {
        let shifted = Self {
            phase: self.phase + T::PI(),
            ..*self
        };
        shifted.argmax_after(x0)
    }
}

/// Linear least squares for `c + a cos(w x) + b sin(w x)` at fixed `w`.
pub fn fit_sinusoid_at<T: Real>(x: &[T], y: &[T], frequency: T) -> Result<SinusoidFit<T>> {
    let design: Vec<Vec<T>> = x
        .iter()
        .map(|&xi| {
            let (s, c) = (frequency * xi).sin_cos();
            vec![T::one(), c, s]
        })
        .collect();
    let ls = least_squares(&design, y)?;
    let (c0, a, b) = (ls.coefficients[0], ls.coefficients[1], ls.coefficients[2]);
    // a cos + b sin = A cos(wx + p) with A cos p = a, A sin p = -b
    Ok(SinusoidFit {
        offset: c0,
        amplitude: a.hypot(b),
        frequency,
        phase: (-b).atan2(a),
        rss: ls.rss,
    })
}

/// Sinusoid fit with unknown frequency: scans from half a period to the
/// sampling limit across the span of `x`, then refines by golden section.
pub fn fit_sinusoid<T: Real>(x: &[T], y: &[T]) -> Result<SinusoidFit<T>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "curve samples",
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 4 {
        return Err(Error::TooFewSamples { needed: 4, found: x.len() });
    }
    let (lo, hi) = x.iter().fold((T::infinity(), T::neg_infinity()), |(l, h), &v| (l.min(v), h.max(v)));
    let span = hi - lo;
    if !(span > T::zero()) {
        return Err(Error::InsufficientSpan("control values do not vary".into()));
    }
    let base = T::TAU() / span;
    let max_cycles = T::from_usize_lossy(x.len()) * T::half();
    let step = T::lit(0.02);
    let mut best: Option<SinusoidFit<T>> = None;
    let mut cycles = T::half();
    while cycles <= max_cycles {
        if let Ok(f) = fit_sinusoid_at(x, y, cycles * base) {
            if best.is_none_or(|b| f.rss < b.rss) {
                best = Some(f);
            }
        }
        cycles += step;
    }
    let coarse = best.ok_or(Error::RankDeficient)?;
    let (mut a, mut b) = (coarse.frequency - step * base, coarse.frequency + step * base);
    let golden = T::lit(0.618_033_988_749_895);
    let rss = |w: T| fit_sinusoid_at(x, y, w).map_or(T::infinity(), |f| f.rss);
    for _ in 0..80 {
        let (c, d) = (b - golden * (b - a), a + golden * (b - a));
        if rss(c) <= rss(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let refined = fit_sinusoid_at(x, y, (a + b) * T::half())?;
    Ok(if refined.rss <= coarse.rss { refined } else { coarse })
}

fn minmax_ratio<T: Real>(max: T, min: T) -> T {
    if max + min > T::zero() {
        ((max - min) / (max + min)).max(T::zero()).min(T::one())
    } else {
        T::zero()
    }
}

fn check_curve<T: Real>(counts: &[T]) -> Result<()> {
    if counts.len() < 2 {
        return Err(Error::DegenerateCurve(format!("{} samples, need at least 2", counts.len())));
    }
    if let Some(c) = counts.iter().find(|c| !c.is_finite()) {
        return Err(Error::DegenerateCurve(format!("non-finite sample {c}")));
    }
    if counts.iter().all(|c| *c == T::zero()) {
        return Err(Error::DegenerateCurve("all samples are zero".into()));
    }
    Ok(())
}

/// `(N_max - N_min) / (N_max + N_min)` from the raw sample extrema.
pub fn visibility_raw<T: Real>(counts: &[T]) -> Result<T> {
    check_curve(counts)?;
    let (min, max) = counts.iter().fold((T::infinity(), T::neg_infinity()), |(l, h), &v| (l.min(v), h.max(v)));
    Ok(minmax_ratio(max, min.max(T::zero())))
}

/// Min-max visibility of a fringe taken from the extrema of a fitted
/// sinusoid. Curves too short to fit (fewer than 5 samples) fall back to
/// the raw extrema.
pub fn visibility_minmax<T: Real>(control: &[T], counts: &[T]) -> Result<T> {
    check_curve(counts)?;
    if control.len() != counts.len() {
        return Err(Error::DimensionMismatch {
            what: "curve samples",
            expected: control.len(),
            found: counts.len(),
        });
    }
    if counts.len() < 5 {
        return visibility_raw(counts);
    }
    if counts.iter().all(|c| *c == counts[0]) {
        return Ok(T::zero());
    }
    match fit_sinusoid(control, counts) {
        Ok(f) => Ok(minmax_ratio(f.maximum(), f.minimum())),
        Err(Error::RankDeficient) | Err(Error::InsufficientSpan(_)) => visibility_raw(counts),
        Err(e) => Err(e),
    }
}

/// Same with a known fringe frequency (rad per control unit).
pub fn visibility_at_frequency<T: Real>(control: &[T], counts: &[T], frequency: T) -> Result<T> {
    check_curve(counts)?;
    let f = fit_sinusoid_at(control, counts, frequency)?;
    Ok(minmax_ratio(f.maximum(), f.minimum()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corrected<T> {
    pub value: T,
    /// The accidental estimate exceeded the raw count and the result was
    /// clamped to zero.
    pub clamped: bool,
}

/// `raw - accidental`, clamped at zero with a flag.
pub fn correct_accidentals<T: Real>(rec: &CountRecord<T>) -> Corrected<T> {
    let v = rec.background_subtracted();
    if v < T::zero() {
        Corrected {
            value: T::zero(),
            clamped: true,
        }
    } else {
        Corrected {
            value: v,
            clamped: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundTest<T> {
    pub passes: bool,
    /// Distance above the classical bound in units of the uncertainty.
    pub n_sigma: T,
}

/// Compares a measured `(0,2)` visibility with [`CLASSICAL_NOON_BOUND`].
pub fn classical_bound_test<T: Real>(visibility: T, sigma: T) -> Result<BoundTest<T>> {
    if !(sigma > T::zero()) {
        return Err(Error::invalid("sigma", "uncertainty must be > 0"));
    }
    let bound = T::one() / T::lit(3.0);
    Ok(BoundTest {
        passes: visibility > bound,
        n_sigma: (visibility - bound) / sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Poisson};

    #[test]
    fn constant_and_ideal_curves() {
        let x: Vec<f64> = (0..40).map(|k| k as f64 * 0.05).collect();
        assert_eq!(visibility_minmax(&x, &vec![3.0; 40]).unwrap(), 0.0);
        let y: Vec<f64> = x.iter().map(|&v| 1.0 + (4.0 * v).cos()).collect();
        assert!((visibility_minmax(&x, &y).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_curves() {
        assert!(matches!(visibility_minmax(&[0.0], &[1.0]), Err(Error::DegenerateCurve(_))));
        assert!(matches!(visibility_minmax(&[0.0, 1.0, 2.0], &[0.0; 3]), Err(Error::DegenerateCurve(_))));
        assert!((visibility_minmax::<f64>(&[0.0, 1.0], &[3.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn recovers_injected_visibility_under_shot_noise() {
        // single-photon fringe, ~1200 counts at the maximum
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..60).map(|k| k as f64 * 0.5 / 59.0).collect();
        let mut errors = Vec::new();
        for _ in 0..50 {
            let y: Vec<f64> = x
                .iter()
                .map(|&p| {
                    let mean = 600.0 * (1.0 + 0.93 * (0.837 + 13.43 * p).cos());
                    Poisson::new(mean).unwrap().sample(&mut rng)
                })
                .collect();
            errors.push(visibility_minmax(&x, &y).unwrap() - 0.93);
            // raw extrema are biased high
            assert!(visibility_raw(&y).unwrap() > 0.9);
        }
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let rms = (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt();
        assert!(mean.abs() < 0.005 && rms < 0.01, "{mean} {rms}");
    }

    #[test]
    fn known_frequency_fit() {
        let x: Vec<f64> = (0..30).map(|k| k as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|&v| 2.0 + 0.5 * (3.0 * v + 1.0).cos()).collect();
        let f = fit_sinusoid_at(&x, &y, 3.0).unwrap();
        assert!((f.offset - 2.0).abs() < 1e-12 && (f.amplitude - 0.5).abs() < 1e-12);
        assert!((f.phase - 1.0).abs() < 1e-12);
        assert!((visibility_at_frequency(&x, &y, 3.0).unwrap() - 0.25).abs() < 1e-12);
        let free = fit_sinusoid(&x, &y).unwrap();
        assert!((free.frequency - 3.0).abs() < 1e-6);
        let top = free.argmax_after(0.0);
        assert!((top - (std::f64::consts::TAU - 1.0) / 3.0).abs() < 1e-5);
        assert!((free.argmin_after(0.0) - (std::f64::consts::PI - 1.0) / 3.0).abs() < 1e-5);
    }

    #[test]
    fn accidental_correction() {
        let r = CountRecord::new(100.0, 0.0, 1.0).unwrap();
        assert_eq!(correct_accidentals(&r), Corrected { value: 100.0, clamped: false });
        let r = CountRecord::new(5.0, 7.0, 1.0).unwrap();
        assert_eq!(correct_accidentals(&r), Corrected { value: 0.0, clamped: true });
    }

    #[test]
    fn subtracting_the_floor_restores_contrast() {
        // (0,2) fringe with corrected contrast 0.949 on a floor that brings
        // the raw contrast down to 0.882
        let x: Vec<f64> = (0..80).map(|k| k as f64 * 0.5 / 79.0).collect();
        let floor = 0.5 * (0.949 / 0.882 - 1.0) * 2.0 * 300.0;
        let recs: Vec<CountRecord<f64>> = x
            .iter()
            .map(|&p| {
                let signal = 300.0 * (1.0 + 0.949 * (0.837 + 2.0 * 13.43 * p).cos());
                CountRecord::new(signal + floor, floor, 1.0).unwrap()
            })
            .collect();
        let raw: Vec<f64> = recs.iter().map(|r| r.raw).collect();
        let net: Vec<f64> = recs.iter().map(|r| correct_accidentals(r).value).collect();
        assert!((visibility_minmax(&x, &raw).unwrap() - 0.882).abs() < 1e-6);
        assert!((visibility_minmax(&x, &net).unwrap() - 0.949).abs() < 1e-6);
    }

    #[test]
    fn bound_statistic() {
        let t = classical_bound_test(1.0f64 / 3.0, 0.01).unwrap();
        assert!(!t.passes && t.n_sigma.abs() < 1e-12);
        let raw = classical_bound_test(0.882f64, 0.008).unwrap();
        assert!(raw.passes && raw.n_sigma > 68.0);
        assert!((raw.n_sigma - (0.882 - 1.0 / 3.0) / 0.008).abs() < 1e-12);
        let corrected = classical_bound_test(0.949f64, 0.007).unwrap();
        assert!((corrected.n_sigma - 88.0).abs() < 0.5);
        assert!(classical_bound_test(0.9, 0.0).is_err());
    }
}
