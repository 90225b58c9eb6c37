//! Fit of `I_tot/2 (1 +- V cos(phi0 + alpha P))` to a heater scan.

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::optimize::{levenberg_marquardt, LmOptions, Residuals};
use crate::scalar::{wrap_angle, Real};

use super::power::{Dissipation, ResistorSpec};
use super::scan::{FringeScan, Weighting};

/// Upper end of the initial coarse `alpha` search, rad/W.
pub const ALPHA_SEARCH_MAX: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions<T> {
    /// Used when the scan control is a voltage.
    pub resistor: ResistorSpec<T>,
    pub convention: Dissipation,
    /// Fit `raw - accidental` instead of the raw readings.
    pub subtract_accidentals: bool,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            resistor: ResistorSpec::nominal(),
            convention: Dissipation::Series,
            subtract_accidentals: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult<T> {
    /// rad/W, canonically positive.
    pub alpha: T,
    /// rad, in `(-pi, pi]`.
    pub phi0: T,
    pub visibility: T,
    /// Sum of both outputs, in the units of the readings.
    pub i_tot: T,
    /// Over `(alpha, phi0, visibility, i_tot)`, scaled by the reduced chi-square.
    pub covariance: [[T; 4]; 4],
    /// Unweighted RMS of the residuals.
    pub residual_rms: T,
    pub points: usize,
}

impl<T: Real> FitResult<T> {
    pub fn std_errors(&self) -> [T; 4] {
        std::array::from_fn(|k| self.covariance[k][k].max(T::zero()).sqrt())
    }

    /// Model value on output `port` (0 or 1) at `power`.
    pub fn predict(&self, port: usize, power: T) -> T {
        fringe_value(port, [self.alpha, self.phi0, self.visibility, self.i_tot], power)
    }
}

fn fringe_value<T: Real>(port: usize, p: [T; 4], power: T) -> T {
    let sign = if port == 0 { T::one() } else { -T::one() };
    p[3] * T::half() * (T::one() + sign * p[2] * (p[1] + p[0] * power).cos())
}

struct Samples<T> {
    power: Vec<T>,
    port: Vec<usize>,
    value: Vec<T>,
    sqrt_weight: Vec<T>,
}

impl<T: Real> Samples<T> {
    fn from_scan(scan: &FringeScan<T>, options: &FitOptions<T>) -> Result<Self> {
        let powers = scan.powers(&options.resistor, options.convention)?;
        let weighting = scan.weighting();
        let mut s = Samples {
            power: Vec::new(),
            port: Vec::new(),
            value: Vec::new(),
            sqrt_weight: Vec::new(),
        };
        for (port, (out, acc)) in scan.outputs.iter().zip(&scan.accidentals).enumerate() {
            for ((&raw, &a), &p) in out.iter().zip(acc).zip(&powers) {
                let v = if options.subtract_accidentals { raw - a } else { raw };
                s.power.push(p);
                s.port.push(port);
                s.value.push(v);
                s.sqrt_weight.push(match weighting {
                    Weighting::Uniform => T::one(),
                    Weighting::Poisson => T::one() / raw.max(T::one()).sqrt(),
                });
            }
        }
        Ok(s)
    }
}

/// Fringe model with an optional quadratic phase term `beta P^2`.
struct FringeProblem<'a, T> {
    samples: &'a Samples<T>,
    quadratic: bool,
}

impl<T: Real> FringeProblem<'_, T> {
    fn phase(&self, p: &[T], power: T) -> T {
        let q = if self.quadratic { p[4] * power * power } else { T::zero() };
        p[1] + p[0] * power + q
    }
}

impl<T: Real> Residuals<T> for FringeProblem<'_, T> {
    fn residuals(&self, p: &[T]) -> Vec<T> {
        let s = self.samples;
        (0..s.value.len())
            .map(|i| {
                let sign = if s.port[i] == 0 { T::one() } else { -T::one() };
                let model = p[3] * T::half() * (T::one() + sign * p[2] * self.phase(p, s.power[i]).cos());
                s.sqrt_weight[i] * (model - s.value[i])
            })
            .collect()
    }

    fn jacobian(&self, p: &[T]) -> Vec<Vec<T>> {
        let s = self.samples;
        (0..s.value.len())
            .map(|i| {
                let sign = if s.port[i] == 0 { T::one() } else { -T::one() };
                let x = s.power[i];
                let (sin, cos) = self.phase(p, x).sin_cos();
                let w = s.sqrt_weight[i];
                let dphase = -w * sign * p[3] * T::half() * p[2] * sin;
                let mut row = vec![
                    dphase * x,
                    dphase,
                    w * sign * p[3] * T::half() * cos,
                    w * T::half() * (T::one() + sign * p[2] * cos),
                ];
                if self.quadratic {
                    row.push(dphase * x * x);
                }
                row
            })
            .collect()
    }
}

/// Weighted linear fit of `a + s (b cos(alpha P) + c sin(alpha P))`, `s = +-1` by port.
fn linear_at_alpha<T: Real>(s: &Samples<T>, alpha: T) -> Result<(T, [T; 3])> {
    let design: Vec<Vec<T>> = (0..s.value.len())
        .map(|i| {
            let sign = if s.port[i] == 0 { T::one() } else { -T::one() };
            let (sin, cos) = (alpha * s.power[i]).sin_cos();
            let w = s.sqrt_weight[i];
            vec![w, w * sign * cos, w * sign * sin]
        })
        .collect();
    let y: Vec<T> = s.value.iter().zip(&s.sqrt_weight).map(|(&v, &w)| v * w).collect();
    let ls = least_squares(&design, &y)?;
    Ok((ls.rss, [ls.coefficients[0], ls.coefficients[1], ls.coefficients[2]]))
}

fn initial_guess<T: Real>(s: &Samples<T>) -> Result<[T; 4]> {
    let (lo, hi) = s.power.iter().fold((T::infinity(), T::neg_infinity()), |(l, h), &p| (l.min(p), h.max(p)));
    let span = hi - lo;
    // grid fine enough that the phase at the far end moves by <= 0.05 rad
    let max = T::lit(ALPHA_SEARCH_MAX);
    let step = (T::lit(0.05) / span).min(T::lit(0.05));
    let mut best: Option<(T, T, [T; 3])> = None;
    let mut alpha = step;
    while alpha <= max {
        if let Ok((rss, c)) = linear_at_alpha(s, alpha) {
            if best.is_none_or(|b| rss < b.0) {
                best = Some((rss, alpha, c));
            }
        }
        alpha += step;
    }
    let (_, alpha, [a, b, c]) = best.ok_or(Error::RankDeficient)?;
    // b cos + c sin = A cos(alpha P + phi0), A cos phi0 = b, A sin phi0 = -c
    let amp = b.hypot(c);
    Ok([alpha, (-c).atan2(b), amp / a, T::two() * a])
}

fn canonical<T: Real>(mut p: [T; 4]) -> [T; 4] {
    if p[0] < T::zero() {
        p[0] = -p[0];
        p[1] = -p[1];
    }
    if p[2] < T::zero() {
        p[2] = -p[2];
        p[1] += T::PI();
    }
    p[1] = wrap_angle(p[1]);
    p
}

fn check_scan<T: Real>(s: &Samples<T>, points: usize) -> Result<()> {
    if points < 8 {
        return Err(Error::InsufficientSpan(format!("{points} samples, need at least 8")));
    }
    let (lo, hi) = s.value.iter().fold((T::infinity(), T::neg_infinity()), |(l, h), &v| (l.min(v), h.max(v)));
    if !(hi - lo > T::epsilon() * hi.abs().max(T::one()) * T::lit(16.0)) {
        return Err(Error::InsufficientSpan("readings are constant".into()));
    }
    Ok(())
}

pub fn fit_fringe<T: Real>(scan: &FringeScan<T>) -> Result<FitResult<T>> {
    fit_fringe_with(scan, &FitOptions::default())
}

pub fn fit_fringe_with<T: Real>(scan: &FringeScan<T>, options: &FitOptions<T>) -> Result<FitResult<T>> {
    let samples = Samples::from_scan(scan, options)?;
    check_scan(&samples, scan.len())?;
    let start = initial_guess(&samples)?;
    let problem = FringeProblem {
        samples: &samples,
        quadratic: false,
    };
    let sol = levenberg_marquardt(&problem, &start, &LmOptions::default())?;
    let mut p = [sol.params[0], sol.params[1], sol.params[2], sol.params[3]];
    let flipped_alpha = p[0] < T::zero();
    let flipped_v = p[2] < T::zero();
    p = canonical(p);
    let span = samples.power.iter().fold(T::neg_infinity(), |m, &x| m.max(x))
        - samples.power.iter().fold(T::infinity(), |m, &x| m.min(x));
    if p[0] * span < T::TAU() {
        return Err(Error::InsufficientSpan(format!(
            "scan covers {:.3} of a fringe period",
            (p[0] * span / T::TAU()).to_f64_lossy()
        )));
    }
    let cov = sol.covariance()?;
    let mut covariance = [[T::zero(); 4]; 4];
    // sign changes of the canonical form carry over to the covariance
    let signs = [
        if flipped_alpha { -T::one() } else { T::one() },
        if flipped_alpha { -T::one() } else { T::one() },
        if flipped_v { -T::one() } else { T::one() },
        T::one(),
    ];
    for a in 0..4 {
        for b in 0..4 {
            covariance[a][b] = cov[a][b] * signs[a] * signs[b];
        }
    }
    let n = samples.value.len();
    let rss: T = (0..n)
        .map(|i| {
            let r = fringe_value(samples.port[i], p, samples.power[i]) - samples.value[i];
            r * r
        })
        .sum();
    Ok(FitResult {
        alpha: p[0],
        phi0: p[1],
        visibility: p[2].min(T::one()),
        i_tot: p[3],
        covariance,
        residual_rms: (rss / T::from_usize_lossy(n)).sqrt(),
        points: n,
    })
}

/// Coefficient of an extra `beta P^2` term in the fringe phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticTerm<T> {
    /// rad/W^2.
    pub coefficient: T,
    pub std_error: T,
    pub t_statistic: T,
}

/// Refits the scan with the phase `phi0 + alpha P + beta P^2` and reports
/// how significant `beta` is.
pub fn quadratic_phase_term<T: Real>(scan: &FringeScan<T>, options: &FitOptions<T>) -> Result<QuadraticTerm<T>> {
    let linear = fit_fringe_with(scan, options)?;
    let samples = Samples::from_scan(scan, options)?;
    let problem = FringeProblem {
        samples: &samples,
        quadratic: true,
    };
    let start = [linear.alpha, linear.phi0, linear.visibility, linear.i_tot, T::zero()];
    let sol = levenberg_marquardt(&problem, &start, &LmOptions::default())?;
    let cov = sol.covariance()?;
    let beta = sol.params[4];
    let se = cov[4][4].max(T::zero()).sqrt();
    Ok(QuadraticTerm {
        coefficient: beta,
        std_error: se,
        t_statistic: if se > T::zero() { (beta / se).abs() } else { T::infinity() },
    })
}
