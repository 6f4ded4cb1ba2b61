//! Sparse multivariate polynomials with integer coefficients.
//!
//! A monomial is an exponent vector without trailing zeros, so the derived
//! lexicographic order on `Vec<u32>` is the lex order of padded vectors.
//! Terms are kept sorted in strictly decreasing monomial order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Field;

pub type Mono = Vec<u32>;

fn trim(mut m: Mono) -> Mono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

/// `a / b` when `b` divides `a`.
pub fn mono_div(a: &[u32], b: &[u32]) -> Option<Mono> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (o, s) in out.iter_mut().zip(b) {
        if *o < *s {
            return None;
        }
        *o -= s;
    }
    Some(trim(out))
}

pub fn mono_min(a: &[u32], b: &[u32]) -> Mono {
    trim(a.iter().zip(b).map(|(x, y)| *x.min(y)).collect())
}

/// Per-variable degree bound of a quotient, or `None` if `d` is too large.
pub fn quotient_box(a: &[u32], d: &[u32]) -> Option<Vec<u32>> {
    if d.len() > a.len() {
        return None;
    }
    a.iter().enumerate().map(|(i, &e)| e.checked_sub(d.get(i).copied().unwrap_or(0))).collect()
}

pub fn mono_var(v: usize, e: u32) -> Mono {
    let mut m = vec![0; v + 1];
    m[v] = e;
    trim(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(c.into())
    }

    /// The variable with 0-based index `v`.
    pub fn var(v: usize) -> Self {
        Self::monomial(mono_var(v, 1), BigInt::one())
    }

    pub fn monomial(m: Mono, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(trim(m), c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, BigInt)>) -> Self {
        let mut map: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(trim(m)).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<Mono, BigInt>) -> Self {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_empty() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_empty())
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_empty() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Mono, BigInt)> {
        self.terms.first()
    }

    /// Number of variable slots used (one past the highest variable index).
    pub fn nvars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.len()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn max_norm(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent over all terms.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Vec::new() };
        let mut m = first.clone();
        for (t, _) in it {
            m = mono_min(&m, t);
            if m.is_empty() {
                break;
            }
        }
        m
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_monomial() {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut map: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match map.entry(mono_mul(ma, mb)) {
                    std::collections::btree_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Self::from_map(map)
    }

    /// Multiplication by a single term; order is preserved.
    pub fn mul_term(&self, m: &[u32], c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(t, d)| (mono_mul(t, m), d * c)).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(&[], c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division of every coefficient by `c`; `None` if some coefficient is not divisible.
    pub fn div_int(&self, c: &BigInt) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, d) in &self.terms {
            let (q, r) = d.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.push((m.clone(), q));
        }
        Some(Poly { terms })
    }

    /// Division by a monomial; `None` unless every term is divisible.
    pub fn div_mono(&self, m: &[u32]) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, c) in &self.terms {
            terms.push((mono_div(t, m)?, c.clone()));
        }
        Some(Poly { terms })
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self` over ℤ.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_monomial() {
            let (m, c) = &d.terms[0];
            return self.div_mono(m)?.div_int(c);
        }
        let (dm, dc) = d.terms[0].clone();
        let cap = quotient_box(&self.degree_vector(), &d.degree_vector())?;
        let mut rem: BTreeMap<Mono, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        while let Some((rm, rc)) = rem.pop_last() {
            let qm = mono_div(&rm, &dm)?;
            if qm.iter().zip(&cap).any(|(e, c)| e > c) || qm.len() > cap.len() {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            for (m, c) in &d.terms[1..] {
                let key = mono_mul(m, &qm);
                let prod = c * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= prod;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-prod);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Largest exponent of each variable.
    pub fn degree_vector(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.nvars()];
        for (m, _) in &self.terms {
            for (o, e) in out.iter_mut().zip(m) {
                *o = (*o).max(*e);
            }
        }
        out
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.div_int(&c).expect("content divides")
    }

    pub fn leading_sign_positive(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Substitutes the integer `value` for variable `v`.
    pub fn eval_var_int(&self, v: usize, value: &BigInt) -> Self {
        let deg = self.degree_in(v) as usize;
        let mut powers = Vec::with_capacity(deg + 1);
        powers.push(BigInt::one());
        for k in 1..=deg {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut m2 = m.clone();
            let e = if v < m2.len() { std::mem::replace(&mut m2[v], 0) } else { 0 };
            (m2, c * &powers[e as usize])
        }))
    }

    /// Splits into coefficients of powers of variable `v`: `self = Σ coeffs[k]·v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Mono, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = if v < m2.len() { std::mem::replace(&mut m2[v], 0) } else { 0 };
            parts[e as usize].push((m2, c.clone()));
        }
        parts.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Self {
        let mut acc = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul_term(&mono_var(v, k as u32), &BigInt::one()));
            }
        }
        acc
    }

    /// Renames variables: variable `i` becomes `map[i]`.
    pub fn rename(&self, map: &[usize]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = Vec::new();
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    let t = map[i];
                    if out.len() <= t {
                        out.resize(t + 1, 0);
                    }
                    out[t] += e;
                }
            }
            (out, c.clone())
        }))
    }

    /// Evaluates at a point of any field; `point[i]` is the value of variable `i`.
    pub fn eval<T: Field>(&self, point: &[T]) -> T {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = big_to_field::<T>(c);
            for (i, e) in m.iter().enumerate() {
                if *e > 0 {
                    t = t * point[i].powi(*e as i64).expect("nonnegative power");
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

/// Converts an integer into any field by repeated doubling in `i64` chunks.
pub fn big_to_field<T: Field>(c: &BigInt) -> T {
    use num_traits::ToPrimitive;
    if let Some(v) = c.to_i64() {
        return T::from_i64(v);
    }
    let base = BigInt::from(1i64 << 32);
    let (q, r) = c.div_mod_floor(&base);
    big_to_field::<T>(&q) * T::from_i64(1i64 << 32) + T::from_i64(r.to_i64().unwrap())
}
