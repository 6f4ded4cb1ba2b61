//! Reduced quotients of integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::poly::{Mono, Poly};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A rational function `num/den` in canonical form: `gcd(num, den) = 1` over
/// ℤ[x], the leading coefficient of `den` is positive, and zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(Poly::from_i64(c))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::new(Poly::constant(r.numer().clone()), Poly::constant(r.denom().clone())).unwrap()
    }

    /// Variable with 0-based index `v` (printed as `x{v+1}`).
    pub fn var(v: usize) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Monomial `∏ x_i^{e_i}` with signed exponents.
    pub fn laurent_monomial(exps: &[i64]) -> Self {
        let mut num: Mono = Vec::new();
        let mut den: Mono = Vec::new();
        for (i, e) in exps.iter().enumerate() {
            if *e > 0 {
                num.resize(i + 1, 0);
                num[i] = *e as u32;
            } else if *e < 0 {
                den.resize(i + 1, 0);
                den[i] = (-*e) as u32;
            }
        }
        RatFunc { num: Poly::monomial(num, BigInt::one()), den: Poly::monomial(den, BigInt::one()) }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if d.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            n = n.neg();
            d = d.neg();
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Whether the denominator is a single term (the Laurent case).
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            return Self::reduce_against(num, self.den.clone(), &self.den);
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::sign_fix(num, den);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let den = b1.mul(&other.den);
        Self::reduce_against(num, den, &g)
    }

    /// Reduces `num/den` when any common factor is known to divide `probe`.
    fn reduce_against(num: Poly, den: Poly, probe: &Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let h = gcd(&num, probe);
        if h.is_one() {
            Self::sign_fix(num, den)
        } else {
            Self::sign_fix(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }

    fn sign_fix(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            RatFunc { num: num.neg(), den: den.neg() }
        } else {
            RatFunc { num, den }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), other.den.div_exact(&g1).unwrap())
        };
        let (c, b) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        Self::sign_fix(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::sign_fix(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) }.normalize_sign())
    }

    fn normalize_sign(self) -> Self {
        Self::sign_fix(self.num, self.den)
    }

    /// Evaluation; `None` when the denominator vanishes at the point.
    pub fn eval<T: Field>(&self, point: &[T]) -> Option<T> {
        let d = self.den.eval(point);
        let inv = d.try_inv()?;
        Some(self.num.eval(point) * inv)
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Option<BigRational> {
        self.eval(point)
    }

    /// Substitutes rational functions for the variables.
    pub fn compose(&self, images: &[RatFunc]) -> Result<Self> {
        let n = eval_poly_ratfunc(&self.num, images);
        let d = eval_poly_ratfunc(&self.den, images);
        n.div(&d)
    }

    /// Number of variable slots used.
    pub fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }

    /// Canonical string with variables printed as `{prefix}{index+1}`.
    pub fn to_string_with(&self, prefix: char) -> String {
        let n = poly_to_string(&self.num, prefix);
        if self.den.is_one() {
            return n;
        }
        let d = poly_to_string(&self.den, prefix);
        let n = if self.num.len() > 1 { format!("({n})") } else { n };
        let d = if self.den.len() > 1 || !self.den.is_monomial_plain() { format!("({d})") } else { d };
        format!("{n}/{d}")
    }

    pub fn parse(s: &str) -> Result<Self> {
        super::parse::parse_ratfunc(s).map(|(r, _)| r)
    }
}

impl Poly {
    /// Whether the polynomial prints as a single atom (constant or one variable power).
    fn is_monomial_plain(&self) -> bool {
        match self.terms() {
            [(m, _)] if m.is_empty() => true,
            [(m, c)] => c.is_one() && m.iter().filter(|e| **e > 0).count() == 1,
            _ => false,
        }
    }
}

fn eval_poly_ratfunc(p: &Poly, images: &[RatFunc]) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut t = RatFunc::from_poly(Poly::constant(c.clone()));
        for (i, e) in m.iter().enumerate() {
            if *e > 0 {
                t = t.mul(&images[i].pow(*e as i64).expect("nonnegative power"));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn mono_to_string(m: &[u32], prefix: char) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{prefix}{}", i + 1)),
            _ => parts.push(format!("{prefix}{}^{e}", i + 1)),
        }
    }
    parts.join("*")
}

pub fn poly_to_string(p: &Poly, prefix: char) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ms = mono_to_string(m, prefix);
        if ms.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&ms);
        } else {
            out.push_str(&format!("{a}*{ms}"));
        }
    }
    out
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with('x'))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl std::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: Self) -> Self {
        RatFunc::add(&self, &rhs)
    }
}

impl std::ops::Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: Self) -> Self {
        RatFunc::mul(&self, &rhs)
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}
