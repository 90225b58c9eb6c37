use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::unitary::Unitary;

fn zero_level<T: Real>() -> T {
    T::lit(T::UNITARY_TOL).sqrt() * T::lit(1e-2)
}

fn unit_phase<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::from_polar(T::one(), -z.arg())
}

/// Removes the input and output phase freedom: every row is rotated so its
/// first-column entry is real and non-negative, then every other column so
/// its first-row entry is. Rows or columns with a (numerically) zero
/// reference entry use their first non-zero entry instead.
pub fn gauge_fix<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let mut out = m.clone();
    let tiny = zero_level::<T>();
    for i in 0..out.rows() {
        if let Some(j) = (0..out.cols()).find(|&j| out[(i, j)].norm() > tiny) {
            let ph = unit_phase(out[(i, j)]);
            for k in 0..out.cols() {
                out[(i, k)] = out[(i, k)] * ph;
            }
        }
    }
    for j in 1..out.cols() {
        if let Some(i) = (0..out.rows()).find(|&i| out[(i, j)].norm() > tiny) {
            let ph = unit_phase(out[(i, j)]);
            for k in 0..out.rows() {
                out[(k, j)] = out[(k, j)] * ph;
            }
        }
    }
    out
}

/// `|Tr(U_theo^dag U_exp)| / dim`.
pub fn gate_fidelity<T: Real>(theory: &Unitary<T>, experiment: &Unitary<T>) -> Result<T> {
    if theory.dim() != experiment.dim() {
        return Err(Error::DimensionMismatch {
            what: "unitary dimension",
            expected: theory.dim(),
            found: experiment.dim(),
        });
    }
    let tr: Complex<T> = theory
        .matrix()
        .as_slice()
        .iter()
        .zip(experiment.matrix().as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok((tr.norm() / T::from_usize_lossy(theory.dim())).min(T::one()))
}

/// Fidelity after bringing both matrices to the gauge of [`gauge_fix`], so
/// that input and output phases the measurement cannot see do not count.
pub fn gauge_fixed_fidelity<T: Real>(theory: &Unitary<T>, experiment: &Unitary<T>) -> Result<T> {
    let a = Unitary::nearest(&gauge_fix(theory.matrix()))?;
    let b = Unitary::nearest(&gauge_fix(experiment.matrix()))?;
    gate_fidelity(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::random_haar;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(a: f64, b: f64) -> Unitary<f64> {
        Unitary::new(CMatrix::from_real_rows(&[vec![a, 0.0], vec![0.0, b]]).unwrap()).unwrap()
    }

    #[test]
    fn trace_cases() {
        let u = diag(1.0, -1.0);
        assert!((gate_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-15);
        assert!(gate_fidelity(&diag(1.0, 1.0), &u).unwrap().abs() < 1e-15);
        assert!((gauge_fixed_fidelity(&diag(1.0, 1.0), &u).unwrap() - 1.0).abs() < 1e-15);
        let three = Unitary::<f64>::identity(3).unwrap();
        assert!(gate_fidelity(&u, &three).is_err());
    }

    #[test]
    fn global_phase_is_invisible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u: Unitary<f64> = random_haar(3, &mut rng).unwrap();
        let v = u.with_global_phase(0.7);
        assert!((gate_fidelity(&u, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauge_makes_first_row_and_column_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u: Unitary<f64> = random_haar(4, &mut rng).unwrap();
        let g = gauge_fix(u.matrix());
        for k in 0..4 {
            assert!(g[(0, k)].im.abs() < 1e-12 && g[(0, k)].re >= 0.0);
            assert!(g[(k, 0)].im.abs() < 1e-12 && g[(k, 0)].re >= 0.0);
        }
        assert!(g.unitarity_deviation() < 1e-12);
    }

    proptest! {
        #[test]
        fn fidelity_ignores_row_and_column_phases(seed in 0u64..5000, dim in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u: Unitary<f64> = random_haar(dim, &mut rng).unwrap();
            let rows: Vec<Complex<f64>> = (0..dim).map(|_| Complex::from_polar(1.0, rng.random_range(-3.0..3.0))).collect();
            let cols: Vec<Complex<f64>> = (0..dim).map(|_| Complex::from_polar(1.0, rng.random_range(-3.0..3.0))).collect();
            let moved = CMatrix::diagonal(&rows) * u.matrix() * &CMatrix::diagonal(&cols);
            let v = Unitary::new(moved).unwrap();
            prop_assert!((gauge_fixed_fidelity(&u, &v).unwrap() - 1.0).abs() < 1e-12);
            prop_assert!(gauge_fix(v.matrix()).distance(&gauge_fix(u.matrix())) < 1e-10);
        }
    }
}
