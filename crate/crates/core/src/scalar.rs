//! Scalar abstraction for the floating-point layers.
//!
//! Geometry, the LP oracle, Monte Carlo sampling and quadrature are written
//! against [`Real`] so they run in `f32` or `f64`. The matrix semigroup layer is
//! exact (integers with big-integer promotion) and converts on demand.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar usable throughout the crate: `f32` or `f64`.
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
    /// Lossy conversion from `f64`; literals in generic code go through here.
    fn lit(x: f64) -> Self;

    /// Relative tolerance appropriate for accumulated round-off in small
    /// dense computations.
    fn default_tolerance() -> Self;

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn default_tolerance() -> Self {
        1e-4
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    fn default_tolerance() -> Self {
        1e-10
    }
}

/// ln(n!) for small n, computed by direct summation.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// n! as a float.
pub fn factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}
