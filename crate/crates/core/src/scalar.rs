//! Floating-point scalar abstraction shared by every transform.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

/// Real scalar usable by the quaternion algebra and the FFT-backed transforms.
///
/// Implemented for `f32` and `f64`. The acceptance tolerances assume `f64`;
/// `f32` is supported for throughput-oriented callers.
pub trait Real:
    Float + FloatConst + FftNum + Default + Display + LowerExp + Debug + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(v: f64) -> Self;

    /// Widens to `f64` (used for reports and file formats).
    fn as_f64(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
