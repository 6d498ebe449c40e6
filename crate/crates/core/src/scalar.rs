//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the domain machinery is written against.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance used when comparing a value against a bound.
    fn bound_tolerance() -> Self;
}

impl Scalar for f64 {
    fn bound_tolerance() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn bound_tolerance() -> Self {
        1e-5
    }
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Index or count into the working scalar.
#[inline]
pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}
