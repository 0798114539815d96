//! Exact celestial integration on normal-crossing resolution data.
//!
//! The arithmetic layer ([`exactnum`]) is generic over an exact field; the
//! geometric layers work over the concrete aliases below: rational numbers
//! and rational functions in the divisor parameter `m`.

pub mod celestial;
pub mod chow;
pub mod exactnum;
pub mod model;
pub mod verify;

pub type Rational = num_rational::BigRational;
pub type Poly = exactnum::Polynomial<Rational>;
pub type RatFunc = exactnum::RationalFunction<Rational>;
