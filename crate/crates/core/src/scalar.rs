use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the statistics are computed in: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Significant decimal digits that survive a round trip through this type.
    /// Digit extraction from reals rounds (half-even) at this many digits.
    const SIGNIFICANT_DECIMALS: usize;

    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {
    const SIGNIFICANT_DECIMALS: usize = 7;
}

impl Real for f64 {
    const SIGNIFICANT_DECIMALS: usize = 15;
}
