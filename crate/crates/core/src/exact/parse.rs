//! Parser for the rational-function grammar: integers, variables `x<k>` or
//! `y<k>` (1-based), `+ - * / ^` and parentheses. Exponents are integers,
//! optionally signed or parenthesised.

use num_bigint::BigInt;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    prefix: Option<char>,
}

/// Parses a rational function, returning it together with the variable
/// prefix it used (if any variable occurred).
pub fn parse_ratfunc(s: &str) -> Result<(RatFunc, Option<char>)> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, prefix: None };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok((r, p.prefix))
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|_| self.err("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            return base.pow(e).map_err(|_| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.exponent()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.exponent()?)
            }
            _ => {
                let n = self.digits()?;
                n.parse::<i64>().map_err(|_| self.err("exponent too large"))
            }
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let r = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let n: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RatFunc::from_poly(Poly::constant(n)))
            }
            Some(c @ (b'x' | b'y')) => {
                let ch = c as char;
                if let Some(p) = self.prefix {
                    if p != ch {
                        return Err(self.err("mixed variable prefixes"));
                    }
                }
                self.prefix = Some(ch);
                self.pos += 1;
                let d = self.digits()?;
                let k: usize = d.parse().map_err(|_| self.err("bad variable index"))?;
                if k == 0 {
                    return Err(self.err("variable indices start at 1"));
                }
                Ok(RatFunc::var(k - 1))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}
