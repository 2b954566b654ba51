//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Linear algebra goes through nalgebra, so the bound is `RealField`; the
/// primitive conversions come from num-traits.
pub trait Real:
    RealField
    + Copy
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Lossy conversion back to `f64` for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| Self::lit(n as f64))
    }

    /// Machine epsilon.
    #[inline]
    fn eps() -> Self {
        Self::default_epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Largest absolute entry of a slice, zero for an empty slice.
pub fn max_abs<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}
