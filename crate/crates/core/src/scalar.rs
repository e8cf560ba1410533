use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar backing the numeric core.
///
/// Implemented for `f32` and `f64`. The tolerance is the absolute slack used by
/// the validity checks (normalization, Hermiticity, trace) at that precision.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    fn tolerance() -> Self;

    /// Converts a literal; panics only for values not representable at all.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar literal out of range")
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
}
