use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::scalar::Real;

/// Removes `2 pi` jumps so that successive differences lie in `[-pi, pi]`.
///
/// A jump within `1e-9` rad of `+-pi` is reported as ambiguous, since either
/// branch is equally continuous.
pub fn unwrap_phase<T: Real>(raw: &[T]) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(raw.len());
    let Some(&first) = raw.first() else {
        return Ok(out);
    };
    out.push(first);
    let mut offset = T::zero();
    let tol = T::lit(1e-9);
    for (i, w) in raw.windows(2).enumerate() {
        let d = w[1] - w[0];
        let wrapped = d - T::TAU() * (d / T::TAU()).round();
        if (wrapped.abs() - T::PI()).abs() <= tol {
            return Err(Error::AmbiguousBranch { index: i + 1 });
        }
        offset += wrapped - d;
        out.push(w[1] + offset);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stability<T> {
    /// Peak-to-peak of the detrended series, rad.
    pub peak_to_peak: T,
    /// Fitted linear drift, rad per hour.
    pub drift_slope: T,
    pub mean: T,
}

/// Peak-to-peak and drift of a phase time series; `times` in seconds.
pub fn stability_metric<T: Real>(times: &[T], phases: &[T]) -> Result<Stability<T>> {
    if times.len() != phases.len() {
        return Err(Error::DimensionMismatch {
            what: "time series samples",
            expected: times.len(),
            found: phases.len(),
        });
    }
    if phases.len() < 10 {
        return Err(Error::TooFewSamples {
            needed: 10,
            found: phases.len(),
        });
    }
    let hour = T::lit(3600.0);
    let t0 = times[0];
    let design: Vec<Vec<T>> = times.iter().map(|&t| vec![T::one(), (t - t0) / hour]).collect();
    let ls = least_squares(&design, phases)?;
    let (lo, hi) = ls
        .residuals
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(l, h), &r| (l.min(r), h.max(r)));
    Ok(Stability {
        peak_to_peak: hi - lo,
        drift_slope: ls.coefficients[1],
        mean: phases.iter().copied().sum::<T>() / T::from_usize_lossy(phases.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::wrap_angle;
    use proptest::prelude::*;

    #[test]
    fn continuous_input_untouched() {
        let x = vec![0.0, 0.5, 1.0, 1.4, 1.1];
        assert_eq!(unwrap_phase(&x).unwrap(), x);
        assert_eq!(unwrap_phase(&[2.0]).unwrap(), vec![2.0]);
        assert!(unwrap_phase::<f64>(&[]).unwrap().is_empty());
    }

    #[test]
    fn sawtooth_becomes_line() {
        let p: Vec<f64> = (0..60).map(|k| k as f64 * 0.01).collect();
        let wrapped: Vec<f64> = p.iter().map(|&x| wrap_angle(0.837 + 13.43 * x)).collect();
        let line = unwrap_phase(&wrapped).unwrap();
        for (x, y) in p.iter().zip(&line) {
            assert!((y - (0.837 + 13.43 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_half_turn_is_ambiguous() {
        let x = [0.0, 0.2, 0.2 + std::f64::consts::PI];
        assert!(matches!(unwrap_phase(&x), Err(Error::AmbiguousBranch { index: 2 })));
    }

    #[test]
    fn stability_cases() {
        let t: Vec<f64> = (0..100).map(|k| k as f64 * 360.0).collect();
        let flat = stability_metric(&t, &vec![1.0; 100]).unwrap();
        assert!(flat.peak_to_peak.abs() < 1e-12 && flat.drift_slope.abs() < 1e-12);
        // 0.1 rad over 10 h
        let ramp: Vec<f64> = t.iter().map(|&s| 0.1 * s / 36000.0).collect();
        let r = stability_metric(&t, &ramp).unwrap();
        assert!((r.drift_slope - 0.01).abs() < 1e-9);
        assert!(r.peak_to_peak < 1e-12);
        let jitter: Vec<f64> = t.iter().map(|&s| 0.005 * (s / 1000.0).sin()).collect();
        let j = stability_metric(&t, &jitter).unwrap();
        assert!((j.peak_to_peak - 0.01).abs() < 1e-3, "{}", j.peak_to_peak);
        assert!(stability_metric(&t[..5], &ramp[..5]).is_err());
    }

    proptest! {
        #[test]
        fn unwrapped_steps_are_small(slope in -2.5..2.5f64, phi0 in -3.0..3.0f64) {
            let raw: Vec<f64> = (0..50).map(|k| wrap_angle(phi0 + slope * k as f64)).collect();
            let u = unwrap_phase(&raw).unwrap();
            for w in u.windows(2) {
                prop_assert!((w[1] - w[0]).abs() <= std::f64::consts::PI);
                prop_assert!((w[1] - w[0] - slope).abs() < 1e-9);
            }
        }
    }
}
