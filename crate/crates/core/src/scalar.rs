//! The real scalar type the numerics are generic over.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
///
/// The associated tolerances are tied to the precision of the type; the
/// `f64` values are the ones the rest of the documentation quotes.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Absolute max-entry tolerance for Hermitian, anti-Hermitian, unitary
    /// and diagonal structure checks.
    const STRUCTURE_TOL: f64;
    /// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below
    /// this fraction of the matrix norm.
    const JACOBI_TOL: f64;
    /// Allowed deviation of a state vector's norm from one.
    const NORM_TOL: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const STRUCTURE_TOL: f64 = 1e-9;
    const JACOBI_TOL: f64 = 1e-12;
    const NORM_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const STRUCTURE_TOL: f64 = 1e-4;
    const JACOBI_TOL: f64 = 1e-6;
    const NORM_TOL: f64 = 1e-5;
}
