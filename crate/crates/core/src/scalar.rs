use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the whole crate is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted in the documentation
/// and tests assume `f64`.
pub trait Real:
    'static
    + Copy
    + Send
    + Sync
    + Default
    + Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `n` as a scalar.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_conversion() {
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f64::count(7), 7.0);
        assert_eq!(1.5f32.to_f64_lossy(), 1.5);
    }
}
