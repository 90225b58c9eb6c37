use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Largest matrix order accepted by [`permanent`].
pub const MAX_PERMANENT_ORDER: usize = 16;

/// Permanent by Ryser's formula with Gray-code updates, `O(2^n n)`.
pub fn permanent<T: Real>(m: &CMatrix<T>) -> Result<Complex<T>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::TooLarge {
            n,
            max: MAX_PERMANENT_ORDER,
        });
    }
    if n == 0 {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let mut row_sums = vec![Complex::new(T::zero(), T::zero()); n];
    let mut total = Complex::new(T::zero(), T::zero());
    let mut gray = 0usize;
    for k in 1..(1usize << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m[(i, col)];
            } else {
                *s -= m[(i, col)];
            }
        }
        gray = next;
        let prod = row_sums.iter().fold(Complex::new(T::one(), T::zero()), |p, &s| p * s);
        if (n - next.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}
