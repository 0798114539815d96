use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Poly, RatFunc, Rational};

/// Poles of a rational function in `m`: every rational root of the
/// denominator, plus whatever factor of the denominator has no rational root
/// left (reported symbolically, never approximated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poles {
    pub rational: BTreeSet<Rational>,
    pub irrational_factors: Vec<Poly>,
}

impl fmt::Display for Poles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.rational.iter().map(|r| r.to_string()).collect();
        parts.extend(
            self.irrational_factors
                .iter()
                .map(|p| format!("roots({p})")),
        );
        if parts.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

pub fn rational_poles(f: &RatFunc) -> Poles {
    let mut rest = f.denom().clone();
    let mut rational = BTreeSet::new();
    loop {
        match rest.degree() {
            None | Some(0) => break,
            _ => {}
        }
        match find_rational_root(&rest) {
            Some(r) => {
                let lin = Poly::linear(Rational::one(), -r.clone());
                while rest.eval(&r).is_zero() {
                    rest = rest.div_rem(&lin).0;
                }
                rational.insert(r);
            }
            None => break,
        }
    }
    let irrational_factors = if rest.degree().unwrap_or(0) > 0 {
        vec![rest.monic()]
    } else {
        Vec::new()
    };
    Poles {
        rational,
        irrational_factors,
    }
}

/// Integer coefficients of a scalar multiple of `p`.
fn integer_form(p: &Poly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

fn find_rational_root(p: &Poly) -> Option<Rational> {
    let ints = integer_form(p);
    if ints[0].is_zero() {
        return Some(Rational::zero());
    }
    let lead = ints.last().unwrap();
    for num in divisors(&ints[0]) {
        for den in divisors(lead) {
            for sign in [1, -1] {
                let r = Rational::new(&num * BigInt::from(sign), den.clone());
                if p.eval(&r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}
