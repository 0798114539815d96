//! Recursive-descent parser for rational-function expressions in `m`:
//! integers, `m`, `+ - * /`, integer powers `^`, parentheses.

use super::{ExactField, NumError, RationalFunction};

pub fn parse_ratfunc<F: ExactField>(src: &str) -> Result<RationalFunction<F>, NumError> {
    let mut p = Parser {
        src,
        chars: src.char_indices().peekable(),
    };
    let v = p.expr()?;
    p.skip_ws();
    match p.chars.peek() {
        None => Ok(v),
        Some(&(i, c)) => Err(p.err(i, &format!("unexpected '{c}'"))),
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl Parser<'_> {
    fn err(&self, at: usize, msg: &str) -> NumError {
        NumError::Parse(format!("{msg} at offset {at} in {:?}", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn pos(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn expr<F: ExactField>(&mut self) -> Result<RationalFunction<F>, NumError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.chars.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<F: ExactField>(&mut self) -> Result<RationalFunction<F>, NumError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.chars.next();
                    let at = self.pos();
                    let rhs = self.unary()?;
                    acc = acc
                        .checked_div(&rhs)
                        .map_err(|_| self.err(at, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<F: ExactField>(&mut self) -> Result<RationalFunction<F>, NumError> {
        match self.peek() {
            Some('-') => {
                self.chars.next();
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.chars.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<F: ExactField>(&mut self) -> Result<RationalFunction<F>, NumError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            self.skip_ws();
            let at = self.pos();
            let neg = if self.chars.peek().is_some_and(|&(_, c)| c == '-') {
                self.chars.next();
                true
            } else {
                false
            };
            let digits = self.digits();
            let e: i32 = digits
                .parse()
                .map_err(|_| self.err(at, "expected integer exponent"))?;
            return base
                .pow(if neg { -e } else { e })
                .map_err(|_| self.err(at, "negative power of zero"));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn atom<F: ExactField>(&mut self) -> Result<RationalFunction<F>, NumError> {
        let at = self.pos();
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    let at = self.pos();
                    return Err(self.err(at, "expected ')'"));
                }
                self.chars.next();
                Ok(v)
            }
            Some('m') => {
                self.chars.next();
                Ok(RationalFunction::var())
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let mut v = RationalFunction::<F>::zero();
                let ten = RationalFunction::<F>::from_i64(10);
                for d in digits.chars() {
                    v = &(&v * &ten) + &RationalFunction::from_i64(d.to_digit(10).unwrap() as i64);
                }
                Ok(v)
            }
            Some(c) => Err(self.err(at, &format!("unexpected '{c}'"))),
            None => Err(self.err(at, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RatFunc;

    #[test]
    fn parses_products_and_quotients() {
        let f: RatFunc = parse_ratfunc("(2+m)*(4+3*m)/(1+m)^2").unwrap();
        assert_eq!(f.to_string(), "(8+10*m+3*m^2)/(1+2*m+m^2)");
        let g: RatFunc = parse_ratfunc("-12*m/(5+6*m)").unwrap();
        assert_eq!(g.to_string(), "-12*m/(5+6*m)");
        let h: RatFunc = parse_ratfunc("5/2").unwrap();
        assert_eq!(h.to_string(), "5/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_ratfunc::<crate::Rational>("1+").is_err());
        assert!(parse_ratfunc::<crate::Rational>("x").is_err());
        assert!(parse_ratfunc::<crate::Rational>("1/(m-m)").is_err());
        assert!(parse_ratfunc::<crate::Rational>("(1+m").is_err());
    }
}
