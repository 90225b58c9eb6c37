//! Unitary from singles and HOM visibilities.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interference::{pair_probability_limits, PairOutput};
use crate::matrix::CMatrix;
use crate::optimize::{levenberg_marquardt, LmOptions, Residuals};
use crate::scalar::Real;
use crate::unitary::Unitary;

use super::dataset::{HomVisibility, TomographyDataset};
use super::gauge::gauge_fix;

/// Largest circuit the reconstruction handles.
pub const MAX_TOMOGRAPHY_DIM: usize = 4;
/// Random restarts of the numerical reconstruction.
pub const RESTARTS: usize = 8;
const RESTART_SEED: u64 = 0x6d7a_6931;

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructedUnitary<T> {
    /// In the gauge of [`gauge_fix`].
    pub unitary: Unitary<T>,
    /// Standard errors of the real and imaginary parts of every entry.
    pub sigma_re: CMatrix<T>,
    pub sigma_im: CMatrix<T>,
    /// Sum of squared differences between the dataset and the predictions
    /// of `unitary`.
    pub residual: T,
    /// Data of this kind cannot tell the result from its complex
    /// conjugate (only relevant above two modes, where it is not real).
    pub conjugate_ambiguous: bool,
}

pub fn reconstruct<T: Real>(dataset: &TomographyDataset<T>) -> Result<ReconstructedUnitary<T>> {
    let n = dataset.dim();
    if n > MAX_TOMOGRAPHY_DIM {
        return Err(Error::TooLarge {
            n,
            max: MAX_TOMOGRAPHY_DIM,
        });
    }
    let u = estimate(dataset)?;
    let (sigma_re, sigma_im) = propagate(dataset, &u)?;
    Ok(ReconstructedUnitary {
        residual: misfit(dataset, &u)?,
        unitary: u,
        sigma_re,
        sigma_im,
        conjugate_ambiguous: n > 2,
    })
}

fn estimate<T: Real>(d: &TomographyDataset<T>) -> Result<Unitary<T>> {
    if d.dim() == 2 {
        analytic_two_mode(d)
    } else {
        numerical(d)
    }
}

fn moduli<T: Real>(d: &TomographyDataset<T>) -> Vec<Vec<T>> {
    // |U_ji| = sqrt(P(j | i)), stored [out][in]
    let n = d.dim();
    (0..n).map(|j| (0..n).map(|i| d.singles[i][j].max(T::zero()).sqrt()).collect()).collect()
}

fn ideal_visibility<T: Real>(v: &HomVisibility<T>, x: T) -> T {
    v.value / x
}

fn finish<T: Real>(m: CMatrix<T>) -> Result<Unitary<T>> {
    let u = m.nearest_unitary()?;
    Unitary::new(gauge_fix(&u).nearest_unitary()?)
}

fn analytic_two_mode<T: Real>(d: &TomographyDataset<T>) -> Result<Unitary<T>> {
    let m = moduli(d);
    let tiny = T::lit(T::UNITARY_TOL).sqrt();
    let zero = |v: T| v <= tiny;
    let exact = d.singles_sigma.iter().flatten().all(|&s| s == T::zero());
    if exact {
        let isolated = [m[0][0], m[0][1], m[1][0], m[1][1]].iter().filter(|&&v| zero(v)).count() == 1
            || (zero(m[0][0]) != zero(m[1][1]))
            || (zero(m[0][1]) != zero(m[1][0]));
        if isolated {
            return Err(Error::GaugeDegenerate(format!(
                "moduli ({}, {}; {}, {}) have an isolated zero",
                m[0][0], m[0][1], m[1][0], m[1][1]
            )));
        }
    }
    // project onto the 2x2 unistochastic form [[p, 1-p], [1-p, p]]
    let p = ((d.singles[0][0] + d.singles[1][1] + (T::one() - d.singles[0][1]) + (T::one() - d.singles[1][0]))
        / T::lit(4.0))
    .max(T::zero())
    .min(T::one());
    let (a, dd) = (p.sqrt(), p.sqrt());
    let (b, c) = ((T::one() - p).sqrt(), (T::one() - p).sqrt());
    let product = a * b * c * dd;
    let entries = if zero(product) {
        // (anti)diagonal: the phase of the remaining entry is pure gauge
        if zero(b) {
            vec![vec![a, T::zero()], vec![T::zero(), dd]]
        } else {
            vec![vec![T::zero(), b], vec![c, T::zero()]]
        }
        .into_iter()
        .map(|r| r.into_iter().map(|v| Complex::new(v, T::zero())).collect())
        .collect::<Vec<Vec<Complex<T>>>>()
    } else {
        let v = d
            .visibility((0, 1), (0, 1))
            .ok_or_else(|| Error::IncompleteDataset("missing the (0,1) -> (0,1) visibility".into()))?;
        // V = -2abcd cos(theta) / (a^2 d^2 + b^2 c^2) for U = [[a, b], [c, d e^{i theta}]]
        let dist = a * a * dd * dd + b * b * c * c;
        let cos = (-ideal_visibility(v, d.indistinguishability) * dist / (T::two() * product))
            .max(-T::one())
            .min(T::one());
        let theta = cos.acos();
        vec![
            vec![Complex::new(a, T::zero()), Complex::new(b, T::zero())],
            vec![Complex::new(c, T::zero()), Complex::from_polar(dd, theta)],
        ]
    };
    finish(CMatrix::from_rows(&entries)?)
}

/// Phases of the lower-right `(n-1)x(n-1)` block, moduli fixed by singles.
struct PhaseProblem<'a, T> {
    moduli: Vec<Vec<T>>,
    data: &'a TomographyDataset<T>,
}

impl<T: Real> PhaseProblem<'_, T> {
    fn matrix(&self, phases: &[T]) -> CMatrix<T> {
        let n = self.moduli.len();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let ph = if i == 0 || j == 0 { T::zero() } else { phases[(j - 1) * (n - 1) + (i - 1)] };
                m[(j, i)] = Complex::from_polar(self.moduli[j][i], ph);
            }
        }
        m
    }
}

fn visibility_of<T: Real>(m: &CMatrix<T>, inputs: (usize, usize), outputs: (usize, usize)) -> T {
    let (a, b) = inputs;
    let (k, l) = outputs;
    let indist = (m[(k, a)] * m[(l, b)] + m[(k, b)] * m[(l, a)]).norm_sqr();
    let dist = m[(k, a)].norm_sqr() * m[(l, b)].norm_sqr() + m[(k, b)].norm_sqr() * m[(l, a)].norm_sqr();
    if dist > T::epsilon() {
        (dist - indist) / dist
    } else {
        T::zero()
    }
}

impl<T: Real> Residuals<T> for PhaseProblem<'_, T> {
    fn residuals(&self, phases: &[T]) -> Vec<T> {
        let m = self.matrix(phases);
        let mut r: Vec<T> = self
            .data
            .visibilities
            .iter()
            .map(|v| visibility_of(&m, v.inputs, v.outputs) - ideal_visibility(v, self.data.indistinguishability))
            .collect();
        let gram = m.adjoint() * &m;
        let n = m.rows();
        for a in 0..n {
            for b in a..n {
                let target = if a == b { T::one() } else { T::zero() };
                r.push(gram[(a, b)].re - target);
                if a != b {
                    r.push(gram[(a, b)].im);
                }
            }
        }
        r
    }
}

fn numerical<T: Real>(d: &TomographyDataset<T>) -> Result<Unitary<T>> {
    let n = d.dim();
    let needed = (n - 1) * (n - 1);
    if d.visibilities.len() < needed {
        return Err(Error::IncompleteDataset(format!(
            "{} visibilities for {needed} unknown phases",
            d.visibilities.len()
        )));
    }
    let m = moduli(d);
    let tiny = T::lit(T::UNITARY_TOL).sqrt();
    if m.iter().flatten().any(|&v| v <= tiny) {
        return Err(Error::GaugeDegenerate("a transition probability is zero; its phase is unconstrained".into()));
    }
    let problem = PhaseProblem { moduli: m, data: d };
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let options = LmOptions {
        max_iterations: 400,
        ..LmOptions::default()
    };
    let mut best: Option<(T, Vec<T>)> = None;
    let mut last_err = None;
    for _ in 0..RESTARTS {
        let start: Vec<T> = (0..needed).map(|_| T::lit(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))).collect();
        match levenberg_marquardt(&problem, &start, &options) {
            Ok(sol) => {
                if best.as_ref().is_none_or(|(c, _)| sol.rss < *c) {
                    best = Some((sol.rss, sol.params));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let (_, phases) = best.ok_or_else(|| {
        last_err.unwrap_or(Error::NonConvergence {
            iterations: options.max_iterations,
            residual: f64::NAN,
        })
    })?;
    finish(problem.matrix(&phases))
}

/// Squared misfit of the dataset against the predictions of `u`.
fn misfit<T: Real>(d: &TomographyDataset<T>, u: &Unitary<T>) -> Result<T> {
    let n = d.dim();
    let mut total = T::zero();
    for i in 0..n {
        for j in 0..n {
            let r = u.get(j, i).norm_sqr() - d.singles[i][j];
            total += r * r;
        }
    }
    for v in &d.visibilities {
        let (indist, dist) = pair_probability_limits(u, v.inputs, PairOutput(v.outputs.0, v.outputs.1))?;
        let model = if dist > T::epsilon() {
            d.indistinguishability * (dist - indist) / dist
        } else {
            T::zero()
        };
        total += (model - v.value) * (model - v.value);
    }
    Ok(total)
}

/// First-order propagation of the dataset uncertainties through the
/// reconstruction map by central differences.
fn propagate<T: Real>(d: &TomographyDataset<T>, u: &Unitary<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let n = d.dim();
    let mut var_re = vec![T::zero(); n * n];
    let mut var_im = vec![T::zero(); n * n];
    let h = T::lit(1e-6);
    let mut accumulate = |plus: &TomographyDataset<T>, minus: &TomographyDataset<T>, sigma: T| -> Result<()> {
        let (up, down) = match (estimate(plus), estimate(minus)) {
            (Ok(a), Ok(b)) => (a, b),
            // a perturbation leaving the valid domain carries no derivative
            _ => return Ok(()),
        };
        for (k, (a, b)) in up.matrix().as_slice().iter().zip(down.matrix().as_slice()).enumerate() {
            let dre = (a.re - b.re) / (T::two() * h) * sigma;
            let dim = (a.im - b.im) / (T::two() * h) * sigma;
            var_re[k] += dre * dre;
            var_im[k] += dim * dim;
        }
        Ok(())
    };
    for i in 0..n {
        for j in 0..n {
            let s = d.singles_sigma[i][j];
            if s > T::zero() {
                let mut plus = d.clone();
                let mut minus = d.clone();
                plus.singles[i][j] += h;
                minus.singles[i][j] = (minus.singles[i][j] - h).max(T::zero());
                renormalise(&mut plus.singles[i]);
                renormalise(&mut minus.singles[i]);
                accumulate(&plus, &minus, s)?;
            }
        }
    }
    for k in 0..d.visibilities.len() {
        let s = d.visibilities[k].sigma;
        if s > T::zero() {
            let mut plus = d.clone();
            let mut minus = d.clone();
            plus.visibilities[k].value += h;
            minus.visibilities[k].value -= h;
            accumulate(&plus, &minus, s)?;
        }
    }
    let _ = u;
    let to_matrix = |v: Vec<T>| {
        CMatrix::from_vec(n, n, v.into_iter().map(|x| Complex::new(x.sqrt(), T::zero())).collect())
    };
    Ok((to_matrix(var_re)?, to_matrix(var_im)?))
}

fn renormalise<T: Real>(row: &mut [T]) {
    let s: T = row.iter().copied().sum();
    if s > T::zero() {
        for p in row {
            *p /= s;
        }
    }
}
