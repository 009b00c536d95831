//! Scalar literal syntax: integers, fractions, generator names, `+ - * / ^`
//! and parentheses, whitespace-insensitive. Printing yields a canonical
//! literal that parses back to the same scalar.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, FieldError, Scalar};

struct Parser<'a> {
    field: &'a Field,
    chars: Vec<char>,
    pos: usize,
    literal: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> FieldError {
        FieldError::Literal {
            literal: self.literal.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, FieldError> {
        let k = self.field;
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                k.neg(&self.term()?)
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' {
                k.add(&acc, &t)
            } else {
                k.sub(&acc, &t)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, FieldError> {
        let k = self.field;
        let mut acc = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = if c == '*' {
                k.mul(&acc, &f)
            } else {
                k.div(&acc, &f)?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar, FieldError> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: u64 = digits
                .parse()
                .map_err(|_| self.err("expected an exponent"))?;
            return Ok(self.field.pow(&base, e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Scalar, FieldError> {
        let k = self.field;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                k.try_from_rational(&BigRational::from_integer(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let step = k
                    .generator_names()
                    .position(|g| g == name)
                    .ok_or_else(|| self.err(format!("unknown generator {name:?}")))?;
                Ok(k.generator(step))
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of literal")),
        }
    }
}

pub(super) fn parse(field: &Field, literal: &str) -> Result<Scalar, FieldError> {
    let mut p = Parser {
        field,
        chars: literal.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        literal,
    };
    if p.chars.is_empty() {
        return Err(p.err("empty literal"));
    }
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Exponent vector of flat position `idx`, one exponent per step.
fn exponents(field: &Field, mut idx: usize) -> Vec<usize> {
    let mut exps = Vec::with_capacity(field.height());
    for step in field.steps() {
        let d = step.degree();
        exps.push(idx % d);
        idx /= d;
    }
    exps
}

pub(super) fn format(field: &Field, a: &Scalar) -> String {
    let mut out = String::new();
    for idx in 0..a.len() {
        let (negative, coeff) = match a {
            Scalar::Rat(v) => {
                if v[idx].is_zero() {
                    continue;
                }
                (v[idx].is_negative(), v[idx].abs())
            }
            Scalar::Mod(v) => {
                if v[idx] == 0 {
                    continue;
                }
                (false, BigRational::from_integer(BigInt::from(v[idx])))
            }
        };
        let mono: Vec<String> = exponents(field, idx)
            .iter()
            .zip(field.generator_names())
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect();
        let term = if mono.is_empty() {
            coeff.to_string()
        } else if coeff.is_one() {
            mono.join("*")
        } else {
            format!("{}*{}", coeff, mono.join("*"))
        };
        if negative {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}
