use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// Exact field scalars usable as polynomial coefficients.
///
/// Canonical forms (reduced fractions, monic denominators) rely on exact
/// equality and exact division, so only exact fields implement this trait;
/// `f32`/`f64` intentionally do not.
pub trait ExactField:
    Clone + PartialEq + Eq + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    /// Builds the field element `n` from a machine integer.
    fn from_i64(n: i64) -> Self;

    /// Numerator and (positive) denominator of the reduced fraction, both as
    /// integral field elements.
    fn numer_denom(&self) -> (Self, Self);

    /// Non-negative gcd of two integral elements.
    fn integer_gcd(&self, other: &Self) -> Self;
}

impl<T> ExactField for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + Debug + Display + Send + Sync + From<i64> + 'static,
{
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(T::from(n))
    }

    fn numer_denom(&self) -> (Self, Self) {
        (
            Ratio::from_integer(self.numer().clone()),
            Ratio::from_integer(self.denom().clone()),
        )
    }

    fn integer_gcd(&self, other: &Self) -> Self {
        Ratio::from_integer(self.to_integer().gcd(&other.to_integer()))
    }
}
