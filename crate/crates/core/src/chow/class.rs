use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use super::{ChowError, ChowRing};
use crate::exactnum::{parse_ratfunc, NumError};
use crate::{RatFunc, Rational};

/// An element of a Chow ring with coefficients in `Q(m)`.
#[derive(Clone, Debug)]
pub struct ChowClass {
    ring: Arc<ChowRing>,
    coeffs: Vec<RatFunc>,
}

impl PartialEq for ChowClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for ChowClass {}

impl ChowClass {
    pub fn zero(ring: Arc<ChowRing>) -> ChowClass {
        let n = ring.rank();
        ChowClass {
            ring,
            coeffs: vec![RatFunc::zero(); n],
        }
    }

    pub fn basis(ring: Arc<ChowRing>, i: usize) -> ChowClass {
        let mut c = ChowClass::zero(ring);
        c.coeffs[i] = RatFunc::one();
        c
    }

    pub fn named(ring: &Arc<ChowRing>, name: &str) -> Result<ChowClass, ChowError> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| ChowError::Parse(format!("unknown basis element {name:?} in {}", ring.label())))?;
        Ok(ChowClass::basis(ring.clone(), i))
    }

    pub fn from_rationals(ring: Arc<ChowRing>, v: &[Rational]) -> ChowClass {
        debug_assert_eq!(v.len(), ring.rank());
        let coeffs = v.iter().map(|c| RatFunc::constant(c.clone())).collect();
        ChowClass { ring, coeffs }
    }

    pub fn from_coeffs(ring: Arc<ChowRing>, coeffs: Vec<RatFunc>) -> Result<ChowClass, ChowError> {
        if coeffs.len() != ring.rank() {
            return Err(ChowError::RingMismatch(format!(
                "{} coefficients for a ring of rank {}",
                coeffs.len(),
                ring.rank()
            )));
        }
        Ok(ChowClass { ring, coeffs })
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn coeff_of(&self, name: &str) -> Option<&RatFunc> {
        self.ring.index_of(name).map(|i| &self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    pub(crate) fn ensure_same_ring(&self, other: &ChowClass) -> Result<(), ChowError> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(ChowError::RingMismatch(format!(
                "{} vs {}",
                self.ring.label(),
                other.ring.label()
            )))
        }
    }

    pub fn checked_add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.ensure_same_ring(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.ensure_same_ring(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &ChowClass, f: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> ChowClass {
        ChowClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> ChowClass {
        self.map(|c| -c)
    }

    pub fn scale(&self, s: &RatFunc) -> ChowClass {
        self.map(|c| c * s)
    }

    pub fn scale_rational(&self, s: &Rational) -> ChowClass {
        self.map(|c| c.scale(s))
    }

    fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> ChowClass {
        ChowClass {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Ring product.
    pub fn checked_mul(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.ensure_same_ring(other)?;
        let n = self.ring.rank();
        let dim = self.ring.dim();
        let mut out = vec![RatFunc::zero(); n];
        for (i, a) in self.nonzero() {
            for (j, b) in other.nonzero() {
                if self.ring.codim(i) + self.ring.codim(j) > dim {
                    continue;
                }
                let row = self.ring.product_row(i, j)?;
                if row.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in row {
                    out[*k] = &out[*k] + &ab.scale(c);
                }
            }
        }
        Ok(ChowClass {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }

    pub fn pow(&self, e: u32) -> Result<ChowClass, ChowError> {
        let mut acc = self.ring.fundamental();
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// The codimension-`k` part.
    pub fn graded_piece(&self, k: usize) -> ChowClass {
        let ring = self.ring.clone();
        ChowClass {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if ring.codim(i) == k { c.clone() } else { RatFunc::zero() })
                .collect(),
            ring,
        }
    }

    /// Degree of the top-codimension piece.
    pub fn degree(&self) -> RatFunc {
        self.nonzero()
            .filter(|(i, _)| self.ring.codim(*i) == self.ring.dim())
            .map(|(i, c)| c.scale(self.ring.degree_of_basis(i)))
            .sum()
    }

    /// True when every nonzero coefficient sits in codimension 1.
    pub fn is_divisor(&self) -> bool {
        self.nonzero().all(|(i, _)| self.ring.codim(i) == 1)
    }

    pub fn ensure_divisor(&self) -> Result<(), ChowError> {
        if self.is_divisor() {
            Ok(())
        } else {
            Err(ChowError::NotADivisor(self.to_string()))
        }
    }

    /// Multiplicative inverse of a class with invertible codimension-0 part,
    /// via the terminating geometric series.
    pub fn inverse(&self) -> Result<ChowClass, ChowError> {
        let c0 = self.coeffs[0].inv().map_err(|_| {
            ChowError::NotInvertible(format!("{} has zero [V]-coefficient", self))
        })?;
        let unit = self.scale(&c0);
        let nil = unit.checked_sub(&self.ring.fundamental())?;
        let mut term = self.ring.fundamental();
        let mut sum = term.clone();
        for _ in 0..self.ring.dim() {
            term = term.checked_mul(&nil)?.neg();
            sum = sum.checked_add(&term)?;
        }
        Ok(sum.scale(&c0))
    }

    pub fn checked_div(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.checked_mul(&other.inverse()?)
    }

    /// Substitutes `m = x` in every coefficient.
    pub fn evaluate(&self, x: &Rational) -> Result<ChowClass, NumError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.evaluate(x).map(RatFunc::constant))
            .collect::<Result<_, _>>()?;
        Ok(ChowClass {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// Parses a class literal such as `"[X] + (3+2*m)/(1+m)*D - 2*e1"`.
    /// A bare coefficient term is a multiple of the fundamental class.
    pub fn parse(ring: &Arc<ChowRing>, src: &str) -> Result<ChowClass, ChowError> {
        let mut out = ChowClass::zero(ring.clone());
        let terms = split_terms(src);
        if terms.is_empty() {
            return Err(ChowError::Parse(format!("empty class literal {src:?}")));
        }
        for (negative, body) in terms {
            let (idx, coeff) = parse_term(ring, body)
                .map_err(|e| ChowError::Parse(format!("{e} in class literal {src:?}")))?;
            let coeff = if negative { -coeff } else { coeff };
            out.coeffs[idx] = &out.coeffs[idx] + &coeff;
        }
        Ok(out)
    }

    /// Coefficient table keyed by basis name, zero entries omitted.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (i, c) in self.nonzero() {
            map.insert(self.ring.name(i).to_string(), Value::String(c.to_string()));
        }
        Value::Object(map)
    }

    pub fn from_json(ring: &Arc<ChowRing>, v: &Value) -> Result<ChowClass, ChowError> {
        match v {
            Value::String(s) => ChowClass::parse(ring, s),
            Value::Object(map) => {
                let mut out = ChowClass::zero(ring.clone());
                for (name, c) in map {
                    let i = ring
                        .index_of(name)
                        .ok_or_else(|| ChowError::Parse(format!("unknown basis element {name:?}")))?;
                    out.coeffs[i] = json_ratfunc(c)?;
                }
                Ok(out)
            }
            _ => Err(ChowError::Parse(format!("expected a class, got {v}"))),
        }
    }
}

/// Reads a coefficient given as a JSON number or rational-function string.
pub(crate) fn json_ratfunc(v: &Value) -> Result<RatFunc, ChowError> {
    match v {
        Value::String(s) => Ok(parse_ratfunc(s)?),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| ChowError::Parse(format!("non-integer number {n}; use a string")))?;
            Ok(RatFunc::from_i64(i))
        }
        _ => Err(ChowError::Parse(format!("expected a coefficient, got {v}"))),
    }
}

/// Splits at top-level `+`/`-` into signed terms. A sign directly after an
/// operator or `^` belongs to the operand, not the sum.
fn split_terms(src: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut prev: Option<char> = None;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && !matches!(prev, Some('*' | '/' | '^')) => {
                let body = src[start..i].trim();
                if !body.is_empty() {
                    out.push((negative, body));
                    negative = false;
                }
                if ch == '-' {
                    negative = !negative;
                }
                start = i + 1;
            }
            _ => {}
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    let body = src[start..].trim();
    if !body.is_empty() {
        out.push((negative, body));
    }
    out
}

fn parse_term(ring: &ChowRing, body: &str) -> Result<(usize, RatFunc), ChowError> {
    if let Some(i) = ring.index_of(body) {
        return Ok((i, RatFunc::one()));
    }
    let mut depth = 0i32;
    for (pos, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                if let Some(i) = ring.index_of(body[pos + 1..].trim()) {
                    return Ok((i, parse_ratfunc(&body[..pos])?));
                }
            }
            _ => {}
        }
    }
    match parse_ratfunc::<Rational>(body) {
        Ok(c) => Ok((0, c)),
        Err(_) => Err(ChowError::Parse(format!("no basis element in term {body:?}"))),
    }
}

/// True when the integer-cleared numerator starts with a negative coefficient.
fn looks_negative(c: &RatFunc) -> bool {
    let (num, _) = c.display_parts();
    num.coeffs()
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x < &Rational::zero())
}

fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    s.char_indices().any(|(i, ch)| {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        depth == 0 && i > 0 && (ch == '+' || ch == '-')
    })
}

fn render_term(c: &RatFunc, name: &str) -> String {
    if c.is_one() {
        return name.to_string();
    }
    let s = c.to_string();
    let wrap = has_top_level_sum(&s) || (c.is_constant() && s.contains('/'));
    if wrap {
        format!("({s})*{name}")
    } else {
        format!("{s}*{name}")
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.nonzero() {
            let neg = looks_negative(c);
            let body = render_term(&if neg { -c } else { c.clone() }, self.ring.name(i));
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
