use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer coefficient type for matrices and polynomials.
///
/// Implemented for every type with the usual exact-integer traits, so `i64`,
/// `i128` and `BigInt` all qualify. Fixed-width types panic on overflow in
/// debug builds; the library's own entry points use `BigInt`.
pub trait Coeff:
    Clone + Debug + Display + Eq + Ord + Hash + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("coefficient out of range")
    }
}

impl<T> Coeff for T where
    T: Clone + Debug + Display + Eq + Ord + Hash + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}
