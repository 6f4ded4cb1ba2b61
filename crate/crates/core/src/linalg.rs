//! Dense square and rectangular matrices over a [`Field`].

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::SizeMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if !b.is_zero() {
                        let cell = &mut out.data[i * o.cols + j];
                        *cell = cell.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols).clone() * o.get(i % o.rows, j % o.cols).clone()
        })
    }

    /// Inverse by Gauss–Jordan elimination with largest-magnitude pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (piv, mag) = (col..n)
                .map(|r| (r, a.get(r, col).magnitude()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if a.get(piv, col).is_zero() || (!T::EXACT && mag <= 1e-13 * scale) {
                return Err(Error::Singular(format!("pivot {col} vanishes")));
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).try_inv().ok_or_else(|| Error::Singular("zero pivot".into()))?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].clone() * p.clone();
                inv.data[col * n + j] = inv.data[col * n + j].clone() * p.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let av = a.data[col * n + j].clone();
                    let iv = inv.data[col * n + j].clone();
                    a.data[r * n + j] = a.data[r * n + j].clone() - f.clone() * av;
                    inv.data[r * n + j] = inv.data[r * n + j].clone() - f.clone() * iv;
                }
            }
        }
        Ok(inv)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.rows);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Largest entrywise distance.
    pub fn max_dist(&self, o: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        self.data.iter().zip(&o.data).map(|(a, b)| a.dist(b)).fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// `max_dist / max(1, max_norm)`.
    pub fn rel_dist(&self, o: &Self) -> f64 {
        self.max_dist(o) / self.max_norm().max(o.max_norm()).max(1.0)
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Field> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &Matrix<T>) -> Matrix<T> {
        self.try_mul(o).expect("matrix shapes")
    }
}

impl<T: Field> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Field> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}
