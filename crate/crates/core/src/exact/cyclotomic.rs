//! Exact arithmetic in cyclotomic fields ℚ(ζ_m), ζ_m = e^{2πi/m}.
//!
//! Elements of different fields are combined by embedding both into
//! ℚ(ζ_lcm). Rationals live in ℚ(ζ_1).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, RootField};

/// Coefficients of the m-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut p: Vec<i64> = vec![0; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let q = cyclotomic_poly(d);
            p = div_monic(&p, &q);
        }
    }
    let p = Arc::new(p);
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|c| *c == 0));
    q
}

pub fn euler_phi(m: u32) -> u32 {
    (cyclotomic_poly(m).len() - 1) as u32
}

#[derive(Clone)]
pub struct Cyclotomic {
    m: u32,
    c: Vec<BigRational>,
}

impl Cyclotomic {
    /// Element from raw coefficients of ζ_m^0, ζ_m^1, …; any length, reduced modulo Φ_m.
    pub fn from_coeffs(m: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(m >= 1, "modulus must be positive");
        let mut e = Cyclotomic { m, c: coeffs };
        e.reduce();
        e
    }

    pub fn from_int_coeffs(m: u32, coeffs: &[i64]) -> Self {
        Self::from_coeffs(m, coeffs.iter().map(|c| BigRational::from_integer((*c).into())).collect())
    }

    pub fn rational(r: BigRational) -> Self {
        Cyclotomic { m: 1, c: vec![r] }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// ζ_m^k.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Self::from_coeffs(m, c)
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    fn reduce(&mut self) {
        let phi = cyclotomic_poly(self.m);
        let d = phi.len() - 1;
        for k in (d..self.c.len()).rev() {
            let lead = std::mem::replace(&mut self.c[k], BigRational::zero());
            if lead.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(d) {
                if *pj != 0 {
                    let t = &lead * BigRational::from_integer((*pj).into());
                    self.c[k - d + j] -= t;
                }
            }
        }
        self.c.resize(d, BigRational::zero());
    }

    /// The same element written in ℚ(ζ_l); requires `m | l`.
    pub fn embed(&self, l: u32) -> Self {
        if l == self.m {
            return self.clone();
        }
        assert!(l % self.m == 0, "embedding requires m | l");
        let step = (l / self.m) as usize;
        let mut c = vec![BigRational::zero(); step * self.c.len().max(1)];
        for (k, v) in self.c.iter().enumerate() {
            c[k * step] = v.clone();
        }
        Self::from_coeffs(l, c)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.m == b.m {
            return (a.clone(), b.clone());
        }
        let l = a.m.lcm(&b.m);
        (a.embed(l), b.embed(l))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The image under ζ ↦ ζ^{-1}, i.e. complex conjugation.
    pub fn conjugate(&self) -> Self {
        let m = self.m as usize;
        let mut c = vec![BigRational::zero(); m.max(1)];
        for (k, v) in self.c.iter().enumerate() {
            let idx = (m - k) % m.max(1);
            c[idx] += v;
        }
        Self::from_coeffs(self.m, c)
    }

    /// Multiplicative inverse via Gaussian elimination on the multiplication matrix.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.c.len();
        // column k = coefficients of self·ζ^k
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        for _ in 0..d {
            cols.push(cur.c.clone());
            cur = cur.mul_ref(&Self::zeta_pow(self.m, 1));
        }
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..d).map(|k| cols[k][r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !a[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * p;
                    }
                }
            }
        }
        Ok(Self::from_coeffs(self.m, a.into_iter().map(|row| row[d].clone()).collect()))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        if a.is_zero() || b.is_zero() {
            return Self::from_coeffs(a.m, Vec::new());
        }
        let mut c = vec![BigRational::zero(); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    c[i + j] += x * y;
                }
            }
        }
        Self::from_coeffs(a.m, c)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        Cyclotomic { m: a.m, c }
    }

    /// Value at ζ_m = e^{2πi/m}.
    pub fn to_complex(&self) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (k, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let angle = std::f64::consts::TAU * k as f64 / self.m as f64;
            acc += Complex::from_polar(v.to_f64().unwrap_or(f64::NAN), angle);
        }
        acc
    }

    /// Canonical reduction to the smallest field among divisors of `m` containing the element.
    fn canonical(&self) -> Self {
        if self.m == 1 {
            return self.clone();
        }
        let mut best = self.clone();
        for d in 1..self.m {
            if self.m % d == 0 && euler_phi(d) < euler_phi(best.m) {
                // candidate: solve by checking whether the element lies in ℚ(ζ_d)
                if let Some(e) = self.restrict(d) {
                    best = e;
                }
            }
        }
        best
    }

    /// Finds the representation in ℚ(ζ_d) if the element lies there.
    fn restrict(&self, d: u32) -> Option<Self> {
        let n = euler_phi(d) as usize;
        // images of ζ_d^k in ℚ(ζ_m) form a basis of the subfield; solve the linear system
        let basis: Vec<Self> = (0..n).map(|k| Self::zeta_pow(d, k as i64).embed(self.m)).collect();
        let rows = self.c.len();
        let mut a: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = basis.iter().map(|b| b.c[r].clone()).collect();
                row.push(self.c[r].clone());
                row
            })
            .collect();
        let mut rank_row = 0;
        let mut pivots = Vec::new();
        for col in 0..n {
            let Some(piv) = (rank_row..rows).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank_row, piv);
            let inv = a[rank_row][col].recip();
            for x in a[rank_row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..rows {
                if r != rank_row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let pr = a[rank_row].clone();
                    for (x, p) in a[r].iter_mut().zip(&pr) {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(col);
            rank_row += 1;
        }
        if a[rank_row..].iter().any(|row| !row[n].is_zero()) {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); n];
        for (r, col) in pivots.iter().enumerate() {
            coeffs[*col] = a[r][n].clone();
        }
        Some(Self::from_coeffs(d, coeffs))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.c == b.c
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.canonical();
        let mut parts = Vec::new();
        for (k, v) in e.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let z = match k {
                0 => String::new(),
                1 => format!("z{}", e.m),
                _ => format!("z{}^{k}", e.m),
            };
            let coef = if v.is_one() && !z.is_empty() {
                String::new()
            } else if (-v).is_one() && !z.is_empty() {
                "-".to_string()
            } else if z.is_empty() {
                v.to_string()
            } else {
                format!("{v}*")
            };
            parts.push(format!("{coef}{z}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
        }
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic { m: self.m, c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::integer(0)
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::integer(1)
    }
}

impl Field for Cyclotomic {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Self::integer(n)
    }

    fn try_inv(&self) -> Option<Self> {
        self.inverse().ok()
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_complex().norm()
        }
    }

    fn dist(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            (self.clone() - other.clone()).to_complex().norm().max(f64::MIN_POSITIVE)
        }
    }
}

impl RootField for Cyclotomic {
    fn root_of_unity(m: u32, k: i64) -> Self {
        Self::zeta_pow(m, k)
    }

    fn conj(&self) -> Self {
        self.conjugate()
    }

    fn to_c64(&self) -> Complex<f64> {
        self.to_complex()
    }
}

/// Exact rational from a float-free integer pair, used by callers building coefficients.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
