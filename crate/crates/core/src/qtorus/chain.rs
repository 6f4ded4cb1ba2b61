use std::fmt;

use serde::Serialize;

use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::exact::RatFunc;
use crate::linalg::Matrix;
use crate::scalar::RootField;

use super::element::pairing;
use super::rep::Representation;

/// One factor of an ordered product in the skew field of the quantum torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Factor {
    /// q^{qexp}·Y^{exps}, normal-ordered.
    Mono { qexp: i64, exps: Vec<i64> },
    /// (1 + q^{qexp}·arg)^{±1}.
    Binom { qexp: i64, arg: FactorChain, inverse: bool },
}

/// An ordered product of factors over a torus with `size` generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorChain {
    pub size: usize,
    pub factors: Vec<Factor>,
}

/// q^{−Σ_{i<j}a_ia_jb_{ji}}: the scalar in Y^a = (scalar)·Y_1^{a_1}⋯Y_m^{a_m}.
pub(crate) fn normal_order_exponent(b: &ExchangeMatrix, a: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            s -= a[i] * a[j] * b.at(j, i);
        }
    }
    s
}

impl FactorChain {
    pub fn one(size: usize) -> Self {
        FactorChain { size, factors: Vec::new() }
    }

    pub fn monomial(qexp: i64, exps: Vec<i64>) -> Self {
        FactorChain { size: exps.len(), factors: vec![Factor::Mono { qexp, exps }] }
    }

    /// Y_k^e, k 1-based.
    pub fn generator_pow(size: usize, k: usize, e: i64) -> Self {
        let mut exps = vec![0; size];
        exps[k - 1] = e;
        Self::monomial(0, exps)
    }

    pub fn generator(size: usize, k: usize) -> Self {
        Self::generator_pow(size, k, 1)
    }

    /// (1 + q^{qexp}·arg)^{±1}.
    pub fn binom(qexp: i64, arg: FactorChain, inverse: bool) -> Self {
        FactorChain { size: arg.size, factors: vec![Factor::Binom { qexp, arg, inverse }] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        FactorChain { size: self.size.max(o.size), factors }
    }

    pub fn inverse(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| match f {
                Factor::Mono { qexp, exps } => Factor::Mono { qexp: -qexp, exps: exps.iter().map(|e| -e).collect() },
                Factor::Binom { qexp, arg, inverse } => {
                    Factor::Binom { qexp: *qexp, arg: arg.clone(), inverse: !inverse }
                }
            })
            .collect();
        FactorChain { size: self.size, factors }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::one(self.size);
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Replaces generator Y_i by `gens[i]`; `b` is the matrix of the torus the
    /// chain is written in (it fixes the normal order of monomials).
    pub fn substitute(&self, gens: &[FactorChain], b: &ExchangeMatrix) -> Self {
        let size = gens.first().map_or(self.size, |g| g.size);
        let mut out = FactorChain::one(size);
        for f in &self.factors {
            match f {
                Factor::Mono { qexp, exps } => {
                    let q = qexp + normal_order_exponent(b, exps);
                    if q != 0 {
                        out = out.mul(&FactorChain::monomial(q, vec![0; size]));
                    }
                    for (i, e) in exps.iter().enumerate() {
                        if *e != 0 {
                            out = out.mul(&gens[i].pow(*e));
                        }
                    }
                }
                Factor::Binom { qexp, arg, inverse } => {
                    out.factors.push(Factor::Binom { qexp: *qexp, arg: arg.substitute(gens, b), inverse: *inverse });
                }
            }
        }
        out
    }

    /// Merges adjacent monomials and drops trivial ones, recursively.
    pub fn simplify(&self, b: &ExchangeMatrix) -> Self {
        let mut factors: Vec<Factor> = Vec::new();
        for f in &self.factors {
            match f {
                Factor::Mono { qexp, exps } => {
                    if let Some(Factor::Mono { qexp: q0, exps: e0 }) = factors.last_mut() {
                        *q0 += qexp + pairing(b, e0, exps);
                        for (x, y) in e0.iter_mut().zip(exps) {
                            *x += y;
                        }
                    } else {
                        factors.push(f.clone());
                    }
                }
                Factor::Binom { qexp, arg, inverse } => {
                    factors.push(Factor::Binom { qexp: *qexp, arg: arg.simplify(b), inverse: *inverse })
                }
            }
            if let Some(Factor::Mono { qexp: 0, exps }) = factors.last() {
                if exps.iter().all(|e| *e == 0) {
                    factors.pop();
                }
            }
        }
        FactorChain { size: self.size, factors }
    }

    /// The commuting rational function obtained at q = 1, in y-variables.
    pub fn classical_limit(&self) -> Result<RatFunc> {
        let mut acc = RatFunc::one();
        for f in &self.factors {
            let v = match f {
                Factor::Mono { exps, .. } => RatFunc::laurent_monomial(exps),
                Factor::Binom { arg, inverse, .. } => {
                    let s = RatFunc::one().add(&arg.classical_limit()?);
                    if *inverse {
                        s.inv().map_err(|_| Error::Pole("binomial vanishes at q = 1".into()))?
                    } else {
                        s
                    }
                }
            };
            acc = acc.mul(&v);
        }
        Ok(acc)
    }

    fn eval_by<T: RootField>(
        &self,
        dim: usize,
        q: &T,
        mono: &dyn Fn(&[i64]) -> Result<Matrix<T>>,
    ) -> Result<Matrix<T>> {
        let mut acc = Matrix::identity(dim);
        for f in &self.factors {
            let m = match f {
                Factor::Mono { qexp, exps } => mono(exps)?.scale(&q.powi(*qexp).expect("q is nonzero")),
                Factor::Binom { qexp, arg, inverse } => {
                    let a = arg.eval_by(dim, q, mono)?.scale(&q.powi(*qexp).expect("q is nonzero"));
                    let s = &Matrix::identity(dim) + &a;
                    if *inverse {
                        s.inverse()?
                    } else {
                        s
                    }
                }
            };
            acc = &acc * &m;
        }
        Ok(acc)
    }

    /// Value in a representation of the torus the chain is written in.
    pub fn eval<T: RootField>(&self, rep: &Representation<T>) -> Result<Matrix<T>> {
        self.eval_by(rep.dim(), rep.q(), &|a| Ok(rep.monomial(a)))
    }

    /// Value when the generators are the given matrices (which must satisfy
    /// the relations of `b` at `q`); monomials use the normal order of `b`.
    pub fn eval_with<T: RootField>(&self, gens: &[Matrix<T>], b: &ExchangeMatrix, q: &T) -> Result<Matrix<T>> {
        let dim = gens[0].rows();
        let invs: Vec<Matrix<T>> = gens.iter().map(|g| g.inverse()).collect::<Result<_>>()?;
        let mono = |a: &[i64]| -> Result<Matrix<T>> {
            let mut m = Matrix::identity(dim).scale(&q.powi(normal_order_exponent(b, a)).expect("q is nonzero"));
            for (i, e) in a.iter().enumerate() {
                let g = if *e < 0 { &invs[i] } else { &gens[i] };
                for _ in 0..e.unsigned_abs() {
                    m = &m * g;
                }
            }
            Ok(m)
        };
        self.eval_by(dim, q, &mono)
    }
}

fn q_string(k: i64) -> String {
    if k == 1 {
        "q".into()
    } else {
        format!("q^{k}")
    }
}

fn mono_string(qexp: i64, exps: &[i64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    if qexp != 0 {
        parts.push(q_string(qexp));
    }
    for (i, e) in exps.iter().enumerate() {
        match *e {
            0 => {}
            1 => parts.push(format!("Y{}", i + 1)),
            e => parts.push(format!("Y{}^{}", i + 1, e)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for FactorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                Factor::Mono { qexp, exps } => mono_string(*qexp, exps),
                Factor::Binom { qexp, arg, inverse } => {
                    let a = arg.to_string();
                    let a = if arg.factors.len() > 1 { format!("({a})") } else { a };
                    let body = if *qexp == 0 { format!("(1 + {a})") } else { format!("(1 + {}*{a})", q_string(*qexp)) };
                    if *inverse {
                        format!("{body}^-1")
                    } else {
                        body
                    }
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}
