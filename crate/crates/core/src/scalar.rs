use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer ring the numeric modules can run over.
///
/// Implemented for `i64`, `i128` and [`num_bigint::BigInt`]. Machine integers
/// overflow long before the desk-scale limits, so anything feeding a verdict
/// uses `BigInt` (see [`crate::ExactInt`]).
pub trait Scalar:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_u64_exact(v: u64) -> Self {
        Self::from_u64(v).expect("value does not fit the scalar type")
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("value does not fit the scalar type")
    }

    /// Parse a base-10 literal with optional leading sign.
    fn parse_decimal(s: &str) -> Option<Self> {
        Self::from_str_radix(s.trim(), 10).ok()
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
