//! Exact arithmetic: rationals, univariate polynomials in `m`, and the field
//! of rational functions `Q(m)` used as coefficients everywhere else.

mod field;
mod parse;
mod poles;
mod poly;
mod ratfunc;

use thiserror::Error;

pub use field::ExactField;
pub use parse::parse_ratfunc;
pub use poles::{rational_poles, Poles};
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("ZeroDenominator: rational function with zero denominator")]
    ZeroDenominator,
    #[error("DivisionByZero: division by the zero rational function")]
    DivisionByZero,
    #[error("PoleError: denominator vanishes at m = {0}")]
    Pole(String),
    #[error("IndeterminateError: 0/0 at m = {0}")]
    Indeterminate(String),
    #[error("ParseError: {0}")]
    Parse(String),
}

/// Parses a rational number `a` or `a/b` (optionally signed).
pub fn parse_rational(s: &str) -> Result<crate::Rational, NumError> {
    let f: crate::RatFunc = parse_ratfunc(s)?;
    f.as_constant()
        .ok_or_else(|| NumError::Parse(format!("expected a rational number, got {s:?}")))
}
