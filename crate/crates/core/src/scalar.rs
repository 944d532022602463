//! Scalar abstraction: every floating-point computation in the crate is
//! generic over [`Real`], so the engines and the analysis run unchanged at
//! `f32` or `f64` precision.

use std::fmt;

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + NumCast + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` produced by the RNG or by
    /// exact integer arithmetic. Rounds to nearest for `f32`.
    #[inline]
    fn from_f64_lossy(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite f64 converts to any Real")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_f64_lossy(v as f64)
    }
}

impl Real for f32 {}
impl Real for f64 {}
