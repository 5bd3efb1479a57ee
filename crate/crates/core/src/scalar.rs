//! Scalar abstractions: exact coefficients for symbolic work, floats for numerics.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

use crate::polynomial::Coefficient;

/// Exact field elements used as polynomial coefficients (`Ratio<i64>`, `BigRational`).
pub trait ExactScalar:
    Num
    + Neg<Output = Self>
    + Clone
    + Ord
    + Debug
    + Display
    + ToPrimitive
    + FromPrimitive
    + Send
    + Sync
    + 'static
    + Coefficient<Scalar = Self>
{
}

impl<T> ExactScalar for T where
    T: Num
        + Neg<Output = T>
        + Clone
        + Ord
        + Debug
        + Display
        + ToPrimitive
        + FromPrimitive
        + Send
        + Sync
        + 'static
        + Coefficient<Scalar = T>
{
}

/// Floating-point types used by evaluation and integration (`f32`, `f64`).
pub trait Real: Float + FromPrimitive + Debug + Display + Sum + Send + Sync + 'static {
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Sum + Send + Sync + 'static {}

/// Converts an exact scalar to a float.
pub fn to_real<Q: ExactScalar, T: Real>(q: &Q) -> T {
    T::of(q.to_f64().expect("exact scalar converts to f64"))
}
