//! Scalar abstraction over the floating point type used by the numerics.
//!
//! Everything downstream (trajectories, networks, the assignment solver,
//! training) is generic over [`Scalar`]. The CLI and the experiment harness
//! run on `f64`; `f32` is supported for callers that want the smaller type.

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + core::ops::AddAssign
    + core::ops::SubAssign
    + core::ops::MulAssign
    + core::ops::DivAssign
    + core::fmt::Debug
    + core::fmt::Display
    + core::iter::Sum
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, used to feed RNG draws and config values
    /// into the generic numerics. The RNG always draws in `f64` so that the
    /// random stream is identical for every scalar type.
    fn from_f64_lossy(x: f64) -> Self {
        num_traits::FromPrimitive::from_f64(x).expect("finite f64 converts to scalar")
    }

    /// Conversion to `f64` for reporting and checksums.
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
