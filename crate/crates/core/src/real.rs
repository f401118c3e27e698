use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type used by every numerical routine in the crate.
///
/// Implemented for `f32` and `f64`. Most tolerances in the crate are stated
/// for `f64`; with `f32` they are clamped to what single precision can deliver.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    /// Absolute floor used by quadrature and inversion: `max(1e-12, 64 eps)`.
    #[inline]
    fn tiny_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Clamps a requested tolerance so that it is attainable in this precision:
    /// `50 eps` in double precision, `1000 eps` (about `1e-4`) in single
    /// precision, where nested quadrature loses more digits.
    #[inline]
    fn attainable(tol: Self) -> Self {
        let ulps = if Self::epsilon() > Self::lit(1e-10) { 1000.0 } else { 50.0 };
        tol.max(Self::epsilon() * Self::lit(ulps))
    }

    /// `a * b` with the convention `0 * inf = 0`.
    #[inline]
    fn mul0(a: Self, b: Self) -> Self {
        if a == Self::zero() || b == Self::zero() {
            Self::zero()
        } else {
            a * b
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(f64::mul0(0.0, f64::INFINITY), 0.0);
        assert_eq!(f32::mul0(f32::INFINITY, 0.0), 0.0);
        assert_eq!(f64::mul0(2.0, 3.0), 6.0);
    }

    #[test]
    fn tolerances_scale_with_precision() {
        assert_eq!(f64::tiny_tol(), 1e-12);
        assert!(f32::tiny_tol() > 1e-6);
    }
}
