use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst};
use rand::Rng;

use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::exact::Cyclotomic;
use crate::linalg::Matrix;
use crate::scalar::RootField;

use super::element::pairing;

/// Integer congruence P·M·Pᵀ = d_1J ⊕ … ⊕ d_rJ ⊕ 0 of an alternating matrix,
/// J = [[0,1],[−1,0]], with P unimodular. `p_inv` is P^{-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewNormalForm {
    pub p: Vec<Vec<i64>>,
    pub p_inv: Vec<Vec<i64>>,
    pub blocks: Vec<i64>,
}

struct Reducer {
    m: Vec<Vec<i64>>,
    p: Vec<Vec<i64>>,
    q: Vec<Vec<i64>>,
}

impl Reducer {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap(i, j);
        for row in self.m.iter_mut() {
            row.swap(i, j);
        }
        self.p.swap(i, j);
        for row in self.q.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row_i += t·row_j together with col_i += t·col_j.
    fn add(&mut self, i: usize, j: usize, t: i64) {
        if t == 0 {
            return;
        }
        let n = self.m.len();
        for c in 0..n {
            let v = self.m[j][c];
            self.m[i][c] += t * v;
        }
        for r in 0..n {
            let v = self.m[r][j];
            self.m[r][i] += t * v;
        }
        for c in 0..n {
            let v = self.p[j][c];
            self.p[i][c] += t * v;
        }
        for r in 0..n {
            let v = self.q[r][i];
            self.q[r][j] -= t * v;
        }
    }
}

/// Symplectic-basis reduction over ℤ of an alternating integer matrix.
pub fn skew_normal_form(m: &[Vec<i64>]) -> SkewNormalForm {
    let n = m.len();
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut r = Reducer { m: m.to_vec(), p: id.clone(), q: id };
    let mut blocks = Vec::new();
    let mut s = 0;
    while s + 1 < n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize, i64)> = None;
        for i in s..n {
            for j in s..n {
                let v = r.m[i][j];
                if v != 0 && best.is_none_or(|b| v.abs() < b.2.abs()) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        r.swap(s, i);
        let j = if j == s { i } else { j };
        r.swap(s + 1, j);
        if r.m[s][s + 1] < 0 {
            r.swap(s, s + 1);
        }
        let d = r.m[s][s + 1];
        let mut clean = true;
        for k in s + 2..n {
            // M[s][k] via column s+1, M[s+1][k] via column s
            let t = r.m[s][k].div_euclid(d);
            r.add(k, s + 1, -t);
            let t2 = -r.m[s + 1][k].div_euclid(d);
            r.add(k, s, -t2);
            if r.m[s][k] != 0 || r.m[s + 1][k] != 0 {
                clean = false;
            }
        }
        if clean {
            blocks.push(d);
            s += 2;
        }
    }
    SkewNormalForm { p: r.p, p_inv: r.q, blocks }
}

/// Scalars in which representations are built and κ parameters sampled.
pub trait RepField: RootField {
    fn sample_kappa<R: Rng>(rng: &mut R) -> Self;
}

impl<F> RepField for Complex<F>
where
    F: Float + FloatConst + std::fmt::Debug + Send + Sync + 'static,
{
    fn sample_kappa<R: Rng>(rng: &mut R) -> Self {
        let r: f64 = rng.gen_range(0.6..1.4);
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex::from_polar(F::from(r).unwrap(), F::from(t).unwrap())
    }
}

impl RepField for Cyclotomic {
    fn sample_kappa<R: Rng>(rng: &mut R) -> Self {
        let num: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let den: i64 = rng.gen_range(1..=9);
        Cyclotomic::rational(BigRational::new(num.into(), den.into()))
    }
}

/// Matrices for the generators of the torus of B on (ℂ^N)^{⊗r}, q = e^{πi/N}.
///
/// In coordinates c = aP^{-1} of the skew normal form, block i carries the
/// Weyl operator q^{−αβd_i}X^αZ^{βd_i} (Xe_k = e_{k−1}, Z = diag(ω^k),
/// ω = q²); kernel coordinates act trivially. Generator j is scaled by κ_j.
#[derive(Clone, Debug)]
pub struct Representation<T> {
    b: ExchangeMatrix,
    order: u32,
    q: T,
    kappa: Vec<T>,
    form: SkewNormalForm,
    gens: Vec<Matrix<T>>,
}

impl<T: RootField> Representation<T> {
    pub fn build(b: &ExchangeMatrix, order: u32, kappa: Vec<T>) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidInput("representation order N must be at least 2".into()));
        }
        if kappa.len() != b.size() {
            return Err(Error::SizeMismatch(format!("{} scalings for {} generators", kappa.len(), b.size())));
        }
        if kappa.iter().any(|k| k.try_inv().is_none()) {
            return Err(Error::InvalidInput("scalings must be nonzero".into()));
        }
        let neg: Vec<Vec<i64>> = b.rows().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let form = skew_normal_form(&neg);
        let mut rep = Representation {
            b: b.clone(),
            order,
            q: T::root_of_unity(2 * order, 1),
            kappa,
            form,
            gens: Vec::new(),
        };
        let n = b.size();
        rep.gens = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                rep.monomial(&e)
            })
            .collect();
        rep.check_relations()?;
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        (self.order as usize).pow(self.form.blocks.len() as u32)
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kappa(&self) -> &[T] {
        &self.kappa
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn generators(&self) -> &[Matrix<T>] {
        &self.gens
    }

    pub fn normal_form(&self) -> &SkewNormalForm {
        &self.form
    }

    fn weyl(&self, alpha: i64, beta: i64, d: i64) -> Matrix<T> {
        let n = self.order as usize;
        let nn = self.order as i64;
        let omega = T::root_of_unity(self.order, 1);
        // X^α Z^{βd}: e_k ↦ ω^{kβd} e_{k−α}
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            let row = (k as i64 - alpha).rem_euclid(nn) as usize;
            m.set(row, k, omega.powi((k as i64 * beta * d).rem_euclid(nn)).unwrap());
        }
        m.scale(&self.q.powi((-alpha * beta * d).rem_euclid(2 * nn)).unwrap())
    }

    /// κ^a·W(aP^{-1}): the image of the normal-ordered monomial Y^a.
    pub fn monomial(&self, a: &[i64]) -> Matrix<T> {
        let n = a.len();
        let c: Vec<i64> = (0..n).map(|j| (0..n).map(|i| a[i] * self.form.p_inv[i][j]).sum()).collect();
        let mut m = Matrix::identity(1);
        for (i, d) in self.form.blocks.iter().enumerate() {
            m = m.kron(&self.weyl(c[2 * i], c[2 * i + 1], *d));
        }
        let mut s = T::one();
        for (k, e) in self.kappa.iter().zip(a) {
            s = s * k.powi(*e).expect("nonzero scaling");
        }
        m.scale(&s)
    }

    /// Fails loudly unless Y_kY_j = q^{2b_{jk}}Y_jY_k and Y^aY^c = q^{⟨a,c⟩}Y^{a+c}
    /// hold on generators.
    fn check_relations(&self) -> Result<()> {
        let n = self.b.size();
        for j in 0..n {
            for k in 0..n {
                let lhs = &self.gens[k] * &self.gens[j];
                let rhs = (&self.gens[j] * &self.gens[k]).scale(&self.q.powi(2 * self.b.at(j, k)).unwrap());
                if !close(&lhs, &rhs) {
                    return Err(Error::RelationFailure(format!("Y{}Y{} relation fails", k + 1, j + 1)));
                }
                let mut ej = vec![0; n];
                ej[j] += 1;
                let mut ek = vec![0; n];
                ek[k] += 1;
                let mut sum = ej.clone();
                sum[k] += 1;
                let prod = &self.gens[j] * &self.gens[k];
                let expect = self.monomial(&sum).scale(&self.q.powi(pairing(&self.b, &ej, &ek)).unwrap());
                if !close(&prod, &expect) {
                    return Err(Error::RelationFailure(format!("normal order fails for Y{}Y{}", j + 1, k + 1)));
                }
            }
        }
        Ok(())
    }
}

impl<T: RepField> Representation<T> {
    pub fn random<R: Rng>(b: &ExchangeMatrix, order: u32, rng: &mut R) -> Result<Self> {
        let kappa = (0..b.size()).map(|_| T::sample_kappa(rng)).collect();
        Self::build(b, order, kappa)
    }
}

fn close<T: RootField>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    if T::EXACT {
        a == b
    } else {
        a.rel_dist(b) <= 1e-10
    }
}
