//! Scalar abstraction for the numeric kernels.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Real floating-point scalar usable by the statevector and matrix kernels.
///
/// Gate parameters are stored as `f64` inside circuits and converted on
/// application, so a circuit can be replayed at either precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type (rounding if needed).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 is representable")
    }

    /// Converts this scalar into `f64`.
    fn to_f64_lossless(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
