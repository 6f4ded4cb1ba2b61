use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::exact::RatFunc;
use crate::linalg::Matrix;
use crate::scalar::RootField;

use super::rep::Representation;

/// The skew form with Y^aY^b = q^{⟨a,b⟩}Y^{a+b}: ⟨a,b⟩ = −aᵀBb.
pub fn pairing(b: &ExchangeMatrix, x: &[i64], y: &[i64]) -> i64 {
    let n = b.size();
    let mut s = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            s -= x[i] * b.at(i, j) * y[j];
        }
    }
    s
}

/// Formal Laurent polynomial in q with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QCoeff(BTreeMap<i64, BigInt>);

impl QCoeff {
    pub fn q_pow(k: i64) -> Self {
        QCoeff(BTreeMap::from([(k, BigInt::one())]))
    }

    pub fn integer(c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(0, BigInt::from(c));
        }
        QCoeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.0.iter().map(|(k, c)| (*k, c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let e = m.entry(*k).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                m.remove(k);
            }
        }
        QCoeff(m)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = QCoeff::default();
        for (k1, c1) in &self.0 {
            let mut part = BTreeMap::new();
            for (k2, c2) in &o.0 {
                part.insert(k1 + k2, c1 * c2);
            }
            acc = acc.add(&QCoeff(part));
        }
        acc
    }

    pub fn shift(&self, k: i64) -> Self {
        QCoeff(self.0.iter().map(|(e, c)| (e + k, c.clone())).collect())
    }

    /// Value at q = 1.
    pub fn at_one(&self) -> BigInt {
        self.0.values().sum()
    }

    pub fn eval<T: RootField>(&self, q: &T) -> T {
        let mut s = T::zero();
        for (k, c) in &self.0 {
            let c = crate::exact::poly::big_to_field::<T>(c);
            s = s + c * q.powi(*k).expect("q is nonzero");
        }
        s
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(k, c)| match (*k, c) {
                (0, c) => c.to_string(),
                (k, c) if c.is_one() => format!("q^{k}"),
                (k, c) => format!("{c}*q^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Finite sum Σ c_a Y^a with Y^a the normal-ordered monomial
/// q^{−Σ_{i<j}a_ia_jb_{ji}} Y_1^{a_1}⋯Y_m^{a_m}.
#[derive(Clone, Debug, PartialEq)]
pub struct QTorusElement {
    b: Arc<ExchangeMatrix>,
    terms: BTreeMap<Vec<i64>, QCoeff>,
}

impl QTorusElement {
    pub fn zero(b: Arc<ExchangeMatrix>) -> Self {
        QTorusElement { b, terms: BTreeMap::new() }
    }

    pub fn one(b: Arc<ExchangeMatrix>) -> Self {
        let n = b.size();
        Self::monomial(b, vec![0; n], QCoeff::integer(1))
    }

    pub fn monomial(b: Arc<ExchangeMatrix>, exps: Vec<i64>, c: QCoeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        QTorusElement { b, terms }
    }

    /// Generator Y_k, 1-based.
    pub fn generator(b: Arc<ExchangeMatrix>, k: usize) -> Result<Self> {
        let k0 = b.check_index(k)?;
        let mut e = vec![0; b.size()];
        e[k0] = 1;
        Ok(Self::monomial(b, e, QCoeff::integer(1)))
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QCoeff)> {
        self.terms.iter()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.b != o.b {
            return Err(Error::InvalidInput("elements of different quantum tori".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (a, c) in &o.terms {
            let s = terms.get(a).map_or_else(|| c.clone(), |x| x.add(c));
            if s.is_zero() {
                terms.remove(a);
            } else {
                terms.insert(a.clone(), s);
            }
        }
        Ok(QTorusElement { b: self.b.clone(), terms })
    }

    /// Product using Y^aY^b = q^{⟨a,b⟩}Y^{a+b}.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut acc = Self::zero(self.b.clone());
        for (a, ca) in &self.terms {
            for (e, ce) in &o.terms {
                let s: Vec<i64> = a.iter().zip(e).map(|(x, y)| x + y).collect();
                let c = ca.mul(ce).shift(pairing(&self.b, a, e));
                acc = acc.add(&Self::monomial(self.b.clone(), s, c))?;
            }
        }
        Ok(acc)
    }

    /// The commutative Laurent polynomial obtained at q = 1.
    pub fn classical_limit(&self) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (a, c) in &self.terms {
            let coeff = RatFunc::from_rational(&num_rational::BigRational::from_integer(c.at_one()));
            acc = acc.add(&RatFunc::laurent_monomial(a).mul(&coeff));
        }
        acc
    }

    pub fn eval<T: RootField>(&self, rep: &Representation<T>) -> Matrix<T> {
        let d = rep.dim();
        let mut acc = Matrix::zeros(d, d);
        for (a, c) in &self.terms {
            acc = &acc + &rep.monomial(a).scale(&c.eval(rep.q()));
        }
        acc
    }
}

impl fmt::Display for QTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let mono: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(i, e)| if *e == 1 { format!("Y{}", i + 1) } else { format!("Y{}^{}", i + 1, e) })
                    .collect();
                let cs = c.to_string();
                match (cs.as_str(), mono.is_empty()) {
                    (_, true) => cs,
                    ("1", false) => mono.join("*"),
                    _ => format!("({cs})*{}", mono.join("*")),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
