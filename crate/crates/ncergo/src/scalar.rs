//! Scalar abstraction: every numeric routine in the crate is generic over a
//! real floating-point type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar for all numerics: `f32` or `f64`.
///
/// The documented tolerances (`1e-8`..`1e-12`) are meaningful for `f64`;
/// `f32` instantiations work but need caller-supplied tolerances above its
/// epsilon.
pub trait Real:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for pulling an `f64` constant into the generic scalar type.
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Lossy view of a generic scalar as `f64`, used for error messages.
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
