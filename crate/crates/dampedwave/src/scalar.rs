use std::fmt::{Debug, Display, LowerExp};
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar underlying every numerical kernel in this crate.
///
/// Implemented by `f32` and `f64`. All tolerances quoted in the crate docs
/// assume `f64`; the `f32` instantiation exists for callers that trade
/// accuracy for footprint.
pub trait Scalar:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts a literal; panics only on values no finite float can hold.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable as scalar")
    }

    /// Converts an index or count.
    fn of_usize(n: usize) -> Self {
        // Counts in this crate stay far below 2^24, so even f32 is exact.
        <Self as FromPrimitive>::from_usize(n).expect("count representable as scalar")
    }

    /// Machine tolerance scaled for iterative stopping tests: the larger of
    /// `floor` and 100 machine epsilons, so f32 instantiations remain usable
    /// with tolerances specified for f64.
    fn tol(floor: f64) -> Self {
        Self::of(floor).max(Self::epsilon() * Self::of(100.0))
    }

    fn two() -> Self {
        Self::of(2.0)
    }

    fn half() -> Self {
        Self::of(0.5)
    }

    fn pi() -> Self {
        Self::of(std::f64::consts::PI)
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + RemAssign
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}
