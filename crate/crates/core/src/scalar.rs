//! Scalar abstraction shared by every model in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type the models are generic over (`f32` or `f64`).
///
/// The associated tolerances scale with the precision of the type: the
/// `f64` values are the ones quoted throughout the documentation, the `f32`
/// values are the tightest ones single precision reliably reaches.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Frobenius-norm tolerance on `U†U - I` when accepting a unitary.
    const UNITARY_TOL: f64;
    /// Relative residual at which iterative solvers stop.
    const SOLVER_TOL: f64;
    /// Relative step / gradient tolerance for nonlinear least squares.
    const FIT_TOL: f64;

    /// Converts an `f64` literal. Panics only for values the type cannot
    /// represent at all, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    const UNITARY_TOL: f64 = 1e-10;
    const SOLVER_TOL: f64 = 1e-12;
    const FIT_TOL: f64 = 1e-13;
}

impl Real for f32 {
    const UNITARY_TOL: f64 = 1e-4;
    const SOLVER_TOL: f64 = 1e-6;
    const FIT_TOL: f64 = 1e-6;
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut y = x % tau;
    if y > T::PI() {
        y -= tau;
    } else if y <= -T::PI() {
        y += tau;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        for k in -20..20 {
            let x = k as f64 * 0.77;
            let w = wrap_angle(x);
            assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
            let d = (x - w) / std::f64::consts::TAU;
            assert!((d - d.round()).abs() < 1e-12);
        }
        assert_eq!(wrap_angle(std::f64::consts::PI), std::f64::consts::PI);
        assert_eq!(wrap_angle(-std::f64::consts::PI), std::f64::consts::PI);
    }

    #[test]
    fn f32_literals() {
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f32::two(), 2.0);
    }
}
