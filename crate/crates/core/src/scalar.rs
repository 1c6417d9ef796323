//! Scalar abstraction for the numeric core.
//!
//! Every numeric type in this crate is generic over [`Real`], implemented
//! for `f32` and `f64`. Production runs use `f64`; the aliases at the crate
//! root pin that choice.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the simulation core.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum<Self>
    + LowerExp
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    ///
    /// Panics if the value is not representable; the finite literals used in
    /// this crate always are.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Absolute tolerance for algebraic identities at this precision.
    ///
    /// `1e-12` for `f64`; widened in proportion to the epsilon ratio for
    /// narrower types so the same checks stay meaningful.
    fn algebraic_tol() -> Self {
        let scaled = Self::epsilon() * Self::of(4500.0);
        Self::of(1e-12).max(scaled)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Formats a scalar with 17 significant digits so `f64` values round-trip.
pub fn full_precision<T: Real>(x: T) -> String {
    format!("{:.16e}", x)
}
