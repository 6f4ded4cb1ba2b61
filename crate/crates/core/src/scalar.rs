//! Scalar abstractions shared by the matrix, representation and root-of-unity code.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, One, Signed, ToPrimitive, Zero};

/// A field in which matrices and representations are evaluated.
///
/// Floating implementations treat `dist` as an absolute distance; exact
/// implementations return `0.0` for equal elements.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact (comparisons may then use `==`).
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn try_inv(&self) -> Option<Self>;

    /// Size used for pivoting and relative deviations.
    fn magnitude(&self) -> f64;

    fn dist(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).magnitude()
    }

    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            k >>= 1;
        }
        Some(acc)
    }
}

/// Fields that contain all roots of unity needed by the root-of-unity code.
pub trait RootField: Field {
    /// `exp(2πi·k/m)`.
    fn root_of_unity(m: u32, k: i64) -> Self;

    /// Complex conjugation (the automorphism ζ ↦ ζ^{-1} on cyclotomic fields).
    fn conj(&self) -> Self;

    fn to_c64(&self) -> Complex<f64>;
}

impl<F> Field for Complex<F>
where
    F: Float + FloatConst + Debug + Send + Sync + 'static,
{
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Complex::new(F::from(n).unwrap(), F::zero())
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn magnitude(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl<F> RootField for Complex<F>
where
    F: Float + FloatConst + Debug + Send + Sync + 'static,
{
    fn root_of_unity(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64);
        let angle = F::TAU() * F::from(k).unwrap() / F::from(m).unwrap();
        Complex::from_polar(F::one(), angle)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Floating-point types usable as the real part of a complex scalar.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {}

impl<F: Float + FloatConst + Debug + Send + Sync + 'static> Real for F {}
