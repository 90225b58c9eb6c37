use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::scalar::Real;
use crate::thermal::CrosstalkModel;

/// Phase measured at one combination of heater powers.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSample<T> {
    pub powers: Vec<T>,
    /// Unwrapped phase, rad.
    pub phi: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneFit<T> {
    pub model: CrosstalkModel<T>,
    pub phi0_error: T,
    pub alpha_errors: Vec<T>,
    /// Residual standard error `sqrt(RSS / (n - p))`, rad.
    pub standard_error: T,
    pub residuals: Vec<T>,
}

/// Linear least squares for `phi = phi0 + sum_i alpha_i P_i`.
pub fn fit_crosstalk_plane<T: Real>(samples: &[PlaneSample<T>]) -> Result<PlaneFit<T>> {
    let heaters = samples.first().map_or(0, |s| s.powers.len());
    let needed = (heaters + 2).max(4);
    if samples.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            found: samples.len(),
        });
    }
    if let Some(s) = samples.iter().find(|s| s.powers.len() != heaters) {
        return Err(Error::DimensionMismatch {
            what: "powers per sample",
            expected: heaters,
            found: s.powers.len(),
        });
    }
    let design: Vec<Vec<T>> = samples
        .iter()
        .map(|s| std::iter::once(T::one()).chain(s.powers.iter().copied()).collect())
        .collect();
    let y: Vec<T> = samples.iter().map(|s| s.phi).collect();
    let ls = least_squares(&design, &y)?;
    let dof = samples.len() - heaters - 1;
    let s2 = ls.rss / T::from_usize_lossy(dof);
    let errors: Vec<T> = (0..=heaters)
        .map(|k| (ls.unscaled_covariance[k][k] * s2).max(T::zero()).sqrt())
        .collect();
    Ok(PlaneFit {
        model: CrosstalkModel::new(ls.coefficients[0], ls.coefficients[1..].to_vec())?,
        phi0_error: errors[0],
        alpha_errors: errors[1..].to_vec(),
        standard_error: s2.sqrt(),
        residuals: ls.residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::phase_from_powers;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn grid(model: &CrosstalkModel<f64>, noise: f64, seed: u64) -> Vec<PlaneSample<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = Normal::new(0.0, noise.max(1e-300)).unwrap();
        let mut out = Vec::new();
        for i in 0..19 {
            for j in 0..19 {
                let p = vec![0.025 * i as f64, 0.025 * j as f64];
                let phi = phase_from_powers(model, &p).unwrap() + if noise > 0.0 { n.sample(&mut rng) } else { 0.0 };
                out.push(PlaneSample { powers: p, phi });
            }
        }
        out
    }

    #[test]
    fn recovers_simulated_plane() {
        let model = CrosstalkModel::new(-0.17, vec![13.16, -8.77]).unwrap();
        let fit = fit_crosstalk_plane(&grid(&model, 0.0, 0)).unwrap();
        assert!((fit.model.phi0 + 0.17).abs() < 1e-9);
        assert!((fit.model.alphas[0] - 13.16).abs() < 1e-9);
        assert!((fit.model.alphas[1] + 8.77).abs() < 1e-9);
        assert!(fit.standard_error < 1e-9);
    }

    #[test]
    fn standard_error_matches_injected_noise() {
        let model = CrosstalkModel::new(-0.17, vec![13.16, -8.77]).unwrap();
        let fit = fit_crosstalk_plane(&grid(&model, 0.11, 5)).unwrap();
        assert!((fit.standard_error - 0.11).abs() < 0.015);
        assert!((fit.model.alphas[0] - 13.16).abs() < 4.0 * fit.alpha_errors[0]);
    }

    #[test]
    fn collinear_design_is_rejected() {
        let samples: Vec<_> = (0..10)
            .map(|k| PlaneSample { powers: vec![0.01 * k as f64, 0.02 * k as f64], phi: k as f64 })
            .collect();
        assert!(matches!(fit_crosstalk_plane(&samples), Err(Error::RankDeficient)));
        assert!(matches!(fit_crosstalk_plane(&samples[..3]), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn three_heaters() {
        let model = CrosstalkModel::new(0.4, vec![11.0, -3.0, 1.5]).unwrap();
        let samples: Vec<_> = (0..27)
            .map(|k| {
                let p = vec![0.1 * (k % 3) as f64, 0.1 * ((k / 3) % 3) as f64, 0.1 * (k / 9) as f64];
                PlaneSample { phi: phase_from_powers(&model, &p).unwrap(), powers: p }
            })
            .collect();
        let fit = fit_crosstalk_plane(&samples).unwrap();
        assert!((fit.model.alphas[2] - 1.5).abs() < 1e-9);
    }
}
