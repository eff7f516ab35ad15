//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable")
    }

    #[inline]
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Tolerance for invariant checks: `1e-12`, or a few hundred ulps for
    /// narrower types.
    #[inline]
    fn invariant_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(256.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_two_pi<T: Real>(a: T) -> T {
    let tau = T::TAU();
    let r = a % tau;
    let r = if r < T::zero() { r + tau } else { r };
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// Reduce an angle into `(-π, π]`.
pub fn wrap_pi<T: Real>(a: T) -> T {
    let pi = T::PI();
    let r = wrap_two_pi(a);
    if r > pi {
        r - T::TAU()
    } else {
        r
    }
}

/// Reduce a parameter into the half-open fundamental interval `[-π, π)`.
pub fn wrap_fundamental<T: Real>(a: T) -> T {
    let pi = T::PI();
    let r = wrap_two_pi(a + pi) - pi;
    if r >= pi {
        -pi
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrapping_ranges() {
        assert!((wrap_two_pi(-0.5_f64) - (2.0 * PI - 0.5)).abs() < 1e-15);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_fundamental(PI), -PI);
        assert!((wrap_fundamental(3.5 * PI) + 0.5 * PI).abs() < 1e-14);
        assert!((wrap_two_pi(1.0_f32) - 1.0).abs() < 1e-7);
    }
}
