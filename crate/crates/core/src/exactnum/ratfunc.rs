use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactField, NumError, Polynomial};

/// Element of the rational function field `F(m)` in canonical form:
/// `gcd(num, den) = 1` and `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction<F> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: ExactField> RationalFunction<F> {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self, NumError> {
        if den.is_zero() {
            return Err(NumError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().cloned().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = F::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// The indeterminate `m`.
    pub fn var() -> Self {
        Self::from_poly(Polynomial::var())
    }

    /// `a*m + k`, the shape every multiplicity takes.
    pub fn linear(a: F, k: F) -> Self {
        Self::from_poly(Polynomial::linear(a, k))
    }

    pub fn numer(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The constant value, when this function does not depend on `m`.
    pub fn as_constant(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, NumError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, NumError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact value at `m = x`.
    pub fn evaluate(&self, x: &F) -> Result<F, NumError> {
        let d = self.den.eval(x);
        let n = self.num.eval(x);
        if d.is_zero() {
            return Err(if n.is_zero() {
                NumError::Indeterminate(x.to_string())
            } else {
                NumError::Pole(x.to_string())
            });
        }
        Ok(n / d)
    }

    /// Integer-cleared display pair: both parts are rescaled by one positive
    /// factor so that all coefficients are integers with no common divisor.
    /// The denominator keeps a positive leading coefficient.
    pub fn display_parts(&self) -> (Polynomial<F>, Polynomial<F>) {
        let lambda = clearing_factor(&self.num, &self.den);
        (self.num.scale(&lambda), self.den.scale(&lambda))
    }
}

/// Smallest positive `λ` making `λ·num` and `λ·den` integral and jointly primitive.
fn clearing_factor<F: ExactField>(num: &Polynomial<F>, den: &Polynomial<F>) -> F {
    let parts: Vec<(F, F)> = num
        .coeffs()
        .iter()
        .chain(den.coeffs())
        .map(|c| c.numer_denom())
        .collect();
    let lcm = parts.iter().fold(F::one(), |acc, (_, d)| {
        let g = acc.integer_gcd(d);
        acc / g * d.clone()
    });
    let content = parts
        .iter()
        .map(|(n, d)| n.clone() * (lcm.clone() / d.clone()))
        .filter(|v| !v.is_zero())
        .fold(F::zero(), |g, v| if g.is_zero() { v.abs() } else { g.integer_gcd(&v) });
    if content.is_zero() {
        return F::one();
    }
    lcm / content
}

impl<F: ExactField> Default for RationalFunction<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: ExactField> Zero for RationalFunction<F> {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: ExactField> One for RationalFunction<F> {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl<F: ExactField> From<Polynomial<F>> for RationalFunction<F> {
    fn from(p: Polynomial<F>) -> Self {
        Self::from_poly(p)
    }
}

impl<F: ExactField> Add for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn add(self, rhs: Self) -> RationalFunction<F> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<F: ExactField> Sub for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn sub(self, rhs: Self) -> RationalFunction<F> {
        self + &(-rhs)
    }
}

impl<F: ExactField> Mul for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn mul(self, rhs: Self) -> RationalFunction<F> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den);
        }
        // cross-cancel before multiplying keeps degrees down
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_rem(&g1).0;
        let d2 = rhs.den.div_rem(&g1).0;
        let n2 = rhs.num.div_rem(&g2).0;
        let d1 = self.den.div_rem(&g2).0;
        RationalFunction::reduce(&n1 * &n2, &d1 * &d2)
    }
}

/// Panics on division by zero; use [`RationalFunction::checked_div`] to
/// handle it.
impl<F: ExactField> Div for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn div(self, rhs: Self) -> RationalFunction<F> {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl<F: ExactField> Neg for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<F: ExactField> $tr for RationalFunction<F> {
            type Output = RationalFunction<F>;
            fn $method(self, rhs: Self) -> RationalFunction<F> {
                (&self).$method(&rhs)
            }
        }
        impl<F: ExactField> $tr<&RationalFunction<F>> for RationalFunction<F> {
            type Output = RationalFunction<F>;
            fn $method(self, rhs: &Self) -> RationalFunction<F> {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<F: ExactField> Neg for RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        -&self
    }
}

impl<F: ExactField> std::iter::Sum for RationalFunction<F> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

impl<F: ExactField> std::iter::Product for RationalFunction<F> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| &a * &b)
    }
}

fn needs_parens<F: ExactField>(p: &Polynomial<F>) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
}

/// A lone term `c*m^i` as a divisor must be bracketed: `1/(3*m)`, not `1/3*m`.
fn needs_parens_as_divisor<F: ExactField>(p: &Polynomial<F>) -> bool {
    needs_parens(p) || (!p.is_constant() && p.leading().is_some_and(|c| !c.is_one()))
}

/// `-12*m/(5+6*m)`, `2/(-1+m)`, `5/2`, `1+m`.
impl<F: ExactField> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let (num, den) = self.display_parts();
        if needs_parens(&num) {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        if needs_parens_as_divisor(&den) {
            write!(f, "/({den})")
        } else {
            write!(f, "/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{RatFunc, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn poly(cs: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn gcd_cancellation() {
        let f = RatFunc::new(poly(&[2, 2]), poly(&[-1, 0, 1])).unwrap();
        assert_eq!(f, RatFunc::new(poly(&[2]), poly(&[-1, 1])).unwrap());
        assert_eq!(f.to_string(), "2/(-1+m)");
    }

    #[test]
    fn monomial_denominator_is_bracketed() {
        let f = RatFunc::new(poly(&[1]), poly(&[0, 3])).unwrap();
        assert_eq!(f.to_string(), "1/(3*m)");
        let g = RatFunc::new(poly(&[1]), poly(&[0, 0, 1])).unwrap();
        assert_eq!(g.to_string(), "1/m^2");
    }

    #[test]
    fn zero_normalizes() {
        let f = RatFunc::new(Polynomial::zero(), poly(&[0, 1])).unwrap();
        assert_eq!(f.numer(), &Polynomial::zero());
        assert_eq!(f.denom(), &Polynomial::one());
    }

    #[test]
    fn perfect_square_cancels() {
        let f = RatFunc::new(poly(&[1, 2, 1]), poly(&[1, 1])).unwrap();
        assert_eq!(f, RatFunc::from_poly(poly(&[1, 1])));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RatFunc::new(poly(&[1]), Polynomial::zero()),
            Err(NumError::ZeroDenominator)
        ));
    }

    #[test]
    fn field_examples() {
        let one_plus_m = RatFunc::from_poly(poly(&[1, 1]));
        let a = RatFunc::one().checked_div(&one_plus_m).unwrap();
        let b = RatFunc::var().checked_div(&one_plus_m).unwrap();
        assert_eq!(&a + &b, RatFunc::one());
        assert_eq!(&RatFunc::one() - &b, a);

        let x = RatFunc::new(poly(&[3, 1]), poly(&[1, 1])).unwrap();
        let y = RatFunc::new(poly(&[2, 1]), poly(&[1, 1])).unwrap();
        let expect = RatFunc::new(&poly(&[3, 1]) * &poly(&[2, 1]), poly(&[1, 1]).pow(2)).unwrap();
        assert_eq!(&x * &y, expect);
        assert!(matches!(x.checked_div(&RatFunc::zero()), Err(NumError::DivisionByZero)));
    }

    #[test]
    fn evaluate_examples() {
        let f = RatFunc::new(poly(&[0, -12]), poly(&[5, 6])).unwrap();
        assert_eq!(f.evaluate(&q(1)).unwrap(), Rational::new((-12).into(), 11.into()));
        let g = RatFunc::new(poly(&[2]), poly(&[-1, 1])).unwrap();
        assert!(matches!(g.evaluate(&q(1)), Err(NumError::Pole(_))));
        let h = RatFunc::new(poly(&[3, 2]), poly(&[1, 1])).unwrap();
        assert_eq!(h.evaluate(&q(-2)).unwrap(), q(1));
    }

    #[test]
    fn display_integer_cleared() {
        let f = RatFunc::new(poly(&[0, -12]), poly(&[5, 6])).unwrap();
        assert_eq!(f.to_string(), "-12*m/(5+6*m)");
        let half = RatFunc::constant(Rational::new(5.into(), 2.into()));
        assert_eq!(half.to_string(), "5/2");
    }
}
