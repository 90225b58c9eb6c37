//! Damped Gauss-Newton (Levenberg-Marquardt) for small dense problems.

use crate::error::{Error, Result};
use crate::linalg::{invert, solve};
use crate::scalar::Real;

/// A nonlinear least-squares objective `sum_i r_i(p)^2`.
pub trait Residuals<T: Real> {
    fn residuals(&self, params: &[T]) -> Vec<T>;

    /// Rows are residuals, columns parameters. Central differences unless
    /// overridden.
    fn jacobian(&self, params: &[T]) -> Vec<Vec<T>> {
        let h0 = T::epsilon().cbrt();
        let m = self.residuals(params).len();
        let mut jac = vec![vec![T::zero(); params.len()]; m];
        let mut p = params.to_vec();
        for k in 0..params.len() {
            let h = h0 * params[k].abs().max(T::one());
            p[k] = params[k] + h;
            let up = self.residuals(&p);
            p[k] = params[k] - h;
            let down = self.residuals(&p);
            p[k] = params[k];
            for i in 0..m {
                jac[i][k] = (up[i] - down[i]) / (T::two() * h);
            }
        }
        jac
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LmOptions<T> {
    pub max_iterations: usize,
    /// Relative step and relative cost-decrease tolerance.
    pub tolerance: T,
    pub initial_damping: T,
}

impl<T: Real> Default for LmOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: T::lit(T::FIT_TOL),
            initial_damping: T::lit(1e-3),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LmSolution<T> {
    pub params: Vec<T>,
    pub residuals: Vec<T>,
    pub rss: T,
    /// `J^T J` at the solution.
    pub normal_matrix: Vec<Vec<T>>,
    pub iterations: usize,
}

impl<T: Real> LmSolution<T> {
    /// `(J^T J)^-1 * rss / (m - n)`.
    pub fn covariance(&self) -> Result<Vec<Vec<T>>> {
        let dof = self.residuals.len().saturating_sub(self.params.len());
        let s2 = if dof > 0 {
            self.rss / T::from_usize_lossy(dof)
        } else {
            T::zero()
        };
        let inv = invert(&self.normal_matrix)?;
        Ok(inv.into_iter().map(|row| row.into_iter().map(|v| v * s2).collect()).collect())
    }
}

fn sum_sq<T: Real>(r: &[T]) -> T {
    r.iter().map(|&v| v * v).sum()
}

fn normal_equations<T: Real>(jac: &[Vec<T>], r: &[T]) -> (Vec<Vec<T>>, Vec<T>) {
    let n = jac.first().map_or(0, Vec::len);
    let mut jtj = vec![vec![T::zero(); n]; n];
    let mut jtr = vec![T::zero(); n];
    for (row, &ri) in jac.iter().zip(r) {
        for a in 0..n {
            jtr[a] += row[a] * ri;
            for b in a..n {
                jtj[a][b] += row[a] * row[b];
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            jtj[a][b] = jtj[b][a];
        }
    }
    (jtj, jtr)
}

pub fn levenberg_marquardt<T: Real, P: Residuals<T> + ?Sized>(
    problem: &P,
    start: &[T],
    options: &LmOptions<T>,
) -> Result<LmSolution<T>> {
    let mut p = start.to_vec();
    let mut r = problem.residuals(&p);
    let mut cost = sum_sq(&r);
    if !cost.is_finite() {
        return Err(Error::invalid("start", "residuals are not finite at the initial guess"));
    }
    let mut lambda = options.initial_damping;
    let tol = options.tolerance;
    for it in 0..options.max_iterations {
        let jac = problem.jacobian(&p);
        let (jtj, jtr) = normal_equations(&jac, &r);
        let grad = jtr.iter().fold(T::zero(), |m, g| m.max(g.abs()));
        if grad <= tol * tol * cost.max(T::min_positive_value()).sqrt() || cost == T::zero() {
            return Ok(LmSolution { params: p, residuals: r, rss: cost, normal_matrix: jtj, iterations: it });
        }
        loop {
            let mut damped = jtj.clone();
            for (k, row) in damped.iter_mut().enumerate() {
                row[k] += lambda * jtj[k][k].max(T::epsilon());
            }
            let rhs: Vec<T> = jtr.iter().map(|&g| -g).collect();
            let step = match solve(&damped, &rhs) {
                Ok(s) => s,
                Err(_) => {
                    lambda *= T::lit(10.0);
                    if lambda > T::lit(1e30) {
                        return Err(Error::RankDeficient);
                    }
                    continue;
                }
            };
            let trial: Vec<T> = p.iter().zip(&step).map(|(&a, &d)| a + d).collect();
            let r_trial = problem.residuals(&trial);
            let c_trial = sum_sq(&r_trial);
            let step_norm = step.iter().map(|&d| d * d).sum::<T>().sqrt();
            let p_norm = p.iter().map(|&v| v * v).sum::<T>().sqrt();
            if c_trial.is_finite() && c_trial <= cost {
                let decrease = cost - c_trial;
                p = trial;
                r = r_trial;
                cost = c_trial;
                lambda = (lambda / T::lit(3.0)).max(T::lit(1e-12));
                if step_norm <= tol * (p_norm + tol) || decrease <= tol * cost {
                    let (jtj, _) = normal_equations(&problem.jacobian(&p), &r);
                    return Ok(LmSolution { params: p, residuals: r, rss: cost, normal_matrix: jtj, iterations: it + 1 });
                }
                break;
            }
            lambda *= T::two();
            if lambda > T::lit(1e16) || step_norm <= tol * (p_norm + tol) {
                // no downhill step left: numerical minimum
                return Ok(LmSolution { params: p, residuals: r, rss: cost, normal_matrix: jtj, iterations: it + 1 });
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: options.max_iterations,
        residual: cost.to_f64_lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Exponential {
        t: Vec<f64>,
        y: Vec<f64>,
    }

    impl Residuals<f64> for Exponential {
        fn residuals(&self, p: &[f64]) -> Vec<f64> {
            self.t.iter().zip(&self.y).map(|(&t, &y)| p[0] * (-p[1] * t).exp() - y).collect()
        }
    }

    struct Rosenbrock;

    impl Residuals<f64> for Rosenbrock {
        fn residuals(&self, p: &[f64]) -> Vec<f64> {
            vec![10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]]
        }
    }

    #[test]
    fn exact_exponential() {
        let t: Vec<f64> = (0..20).map(|k| k as f64 * 0.2).collect();
        let y = t.iter().map(|&t| 3.0 * (-0.7 * t).exp()).collect();
        let sol = levenberg_marquardt(&Exponential { t, y }, &[1.0, 0.1], &LmOptions::default()).unwrap();
        assert!((sol.params[0] - 3.0).abs() < 1e-9 && (sol.params[1] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn rosenbrock_valley() {
        let sol = levenberg_marquardt(&Rosenbrock, &[-1.2, 1.0], &LmOptions::default()).unwrap();
        assert!((sol.params[0] - 1.0).abs() < 1e-8 && (sol.params[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = LmOptions { max_iterations: 2, ..LmOptions::default() };
        assert!(matches!(
            levenberg_marquardt(&Rosenbrock, &[-1.2, 1.0], &opts),
            Err(Error::NonConvergence { iterations: 2, .. })
        ));
    }
}
