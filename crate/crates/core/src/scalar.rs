//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the library is generic over: `f32` or `f64`.
///
/// Numerical tolerances depend on the precision of the type, so each
/// implementation carries its own SO(3) membership tolerance.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Tolerance on `‖RᵀR − I‖` and `|det R − 1|` for SO(3) membership.
    fn so3_tol() -> Self;

    /// Tolerance on `‖axis‖ − 1` for unit axes.
    fn unit_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }
}

impl Real for f64 {
    fn so3_tol() -> Self {
        1e-9
    }
    fn unit_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn so3_tol() -> Self {
        1e-5
    }
    fn unit_tol() -> Self {
        1e-5
    }
}
