use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::braid::build_braid_matrix;
use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};

/// A real linear combination of ŷ_1..ŷ_m, the central constants c and c_b,
/// and a pure number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub y: Vec<Rational64>,
    pub c: Rational64,
    pub cb: Rational64,
    pub constant: Rational64,
}

impl LinearForm {
    pub fn zero(m: usize) -> Self {
        LinearForm { y: vec![Rational64::zero(); m], c: Rational64::zero(), cb: Rational64::zero(), constant: Rational64::zero() }
    }

    /// ŷ_k, k 1-based.
    pub fn y(m: usize, k: usize) -> Self {
        let mut f = Self::zero(m);
        f.y[k - 1] = Rational64::one();
        f
    }

    pub fn c(m: usize) -> Self {
        let mut f = Self::zero(m);
        f.c = Rational64::one();
        f
    }

    /// Σ a_k ŷ_k.
    pub fn from_exponents(a: &[i64]) -> Self {
        let mut f = Self::zero(a.len());
        for (x, e) in f.y.iter_mut().zip(a) {
            *x = Rational64::from_integer(*e);
        }
        f
    }

    pub fn size(&self) -> usize {
        self.y.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        LinearForm {
            y: self.y.iter().zip(&o.y).map(|(a, b)| a + b).collect(),
            c: self.c + o.c,
            cb: self.cb + o.cb,
            constant: self.constant + o.constant,
        }
    }

    pub fn scale(&self, t: Rational64) -> Self {
        LinearForm { y: self.y.iter().map(|a| a * t).collect(), c: self.c * t, cb: self.cb * t, constant: self.constant * t }
    }

    pub fn neg(&self) -> Self {
        self.scale(-Rational64::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.y.iter().all(Zero::is_zero) && self.c.is_zero() && self.cb.is_zero() && self.constant.is_zero()
    }

    /// True when the form has no ŷ part, i.e. it is central.
    pub fn is_scalar(&self) -> bool {
        self.y.iter().all(Zero::is_zero)
    }

    /// Integer ŷ-exponents, when the form is Σ a_k ŷ_k with a_k ∈ ℤ.
    pub fn integer_exponents(&self) -> Option<Vec<i64>> {
        if !(self.c.is_zero() && self.cb.is_zero() && self.constant.is_zero()) {
            return None;
        }
        self.y.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// Parses text such as `y4+y5-c`, `2*y3 - 1/2*cb + 1`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty linear form".into() });
        }
        let mut out = Self::zero(m);
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let mut sign = Rational64::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if start != 0 {
                return Err(Error::Parse { pos: i, msg: "expected + or -".into() });
            }
            let mut j = i;
            while j < bytes.len() && bytes[j] != b'+' && bytes[j] != b'-' {
                j += 1;
            }
            let term = &s[i..j];
            let (coef, sym) = match term.split_once('*') {
                Some((a, b)) => (parse_rational(a, i)?, b),
                None if term.starts_with(|c: char| c.is_ascii_digit()) => (parse_rational(term, i)?, ""),
                None => (Rational64::one(), term),
            };
            let coef = coef * sign;
            match sym {
                "" => out.constant += coef,
                "c" => out.c += coef,
                "cb" => out.cb += coef,
                _ => {
                    let k: usize = sym
                        .strip_prefix('y')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| Error::Parse { pos: i, msg: format!("unknown symbol `{sym}`") })?;
                    if k == 0 || k > m {
                        return Err(Error::IndexOutOfRange { index: k, size: m });
                    }
                    out.y[k - 1] += coef;
                }
            }
            i = j;
        }
        Ok(out)
    }
}

fn parse_rational(s: &str, pos: usize) -> Result<Rational64> {
    let err = || Error::Parse { pos, msg: format!("bad coefficient `{s}`") };
    match s.split_once('/') {
        Some((a, b)) => {
            let d: i64 = b.parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Rational64::new(a.parse().map_err(|_| err())?, d))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| err())?)),
    }
}

fn push_term(out: &mut String, coef: Rational64, sym: &str) {
    if coef.is_zero() {
        return;
    }
    let neg = coef.is_negative();
    let a = coef.abs();
    if neg {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    if sym.is_empty() {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(sym);
    } else {
        out.push_str(&format!("{a}*{sym}"));
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, a) in self.y.iter().enumerate() {
            push_term(&mut s, *a, &format!("y{}", k + 1));
        }
        push_term(&mut s, self.c, "c");
        push_term(&mut s, self.cb, "cb");
        push_term(&mut s, self.constant, "");
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The Heisenberg algebra of a torus: [ŷ_j, ŷ_k] = (i/2π)·b_{kj}, with
/// c, c_b central. With the centre constraint ŷ_{3i−1} + ŷ_{3i} = c active
/// (braid matrices only) forms are compared modulo the constraint.
#[derive(Clone, Debug)]
pub struct Context {
    b: ExchangeMatrix,
    strands: Option<usize>,
    center: bool,
}

impl Context {
    pub fn new(b: ExchangeMatrix) -> Self {
        Context { b, strands: None, center: false }
    }

    /// The torus of the n-strand braid matrix, optionally with the centre constraint.
    pub fn braid(n: usize, center: bool) -> Result<Self> {
        Ok(Context { b: build_braid_matrix(n)?, strands: Some(n), center })
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.b.size()
    }

    pub fn strands(&self) -> Option<usize> {
        self.strands
    }

    pub fn center_active(&self) -> bool {
        self.center
    }

    pub fn y(&self, k: usize) -> LinearForm {
        LinearForm::y(self.size(), k)
    }

    pub fn parse(&self, text: &str) -> Result<LinearForm> {
        LinearForm::parse(self.size(), text)
    }

    /// [L, M] as a multiple of i/2π.
    pub fn commutator(&self, l: &LinearForm, m: &LinearForm) -> Result<Rational64> {
        let n = self.size();
        if l.size() != n || m.size() != n {
            return Err(Error::SizeMismatch(format!("forms over {} and {} symbols in a torus of size {n}", l.size(), m.size())));
        }
        let mut s = Rational64::zero();
        for (j, lj) in l.y.iter().enumerate() {
            if lj.is_zero() {
                continue;
            }
            for (k, mk) in m.y.iter().enumerate() {
                let b = self.b.at(k, j);
                if b != 0 {
                    s += lj * mk * Rational64::from_integer(b);
                }
            }
        }
        Ok(s)
    }

    /// Rewrites ŷ_{3i} as c − ŷ_{3i−1} when the constraint is active.
    pub fn canonical(&self, l: &LinearForm) -> LinearForm {
        let mut f = l.clone();
        if let (true, Some(n)) = (self.center, self.strands) {
            for i in 1..=n {
                let t = f.y[3 * i - 1];
                if !t.is_zero() {
                    f.y[3 * i - 1] = Rational64::zero();
                    f.y[3 * i - 2] -= t;
                    f.c += t;
                }
            }
        }
        f
    }

    pub fn equiv(&self, l: &LinearForm, m: &LinearForm) -> bool {
        self.canonical(l) == self.canonical(m)
    }
}
