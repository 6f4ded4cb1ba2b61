use num_complex::Complex;
use serde::Serialize;

use crate::analytic::li2;
use crate::error::{Error, Result};
use crate::scalar::{Real, RootField};

pub(crate) fn re<F: Real>(x: f64) -> F {
    F::from(x).unwrap()
}

/// e^{2πik/n} as a complex float.
pub(crate) fn unit<F: Real>(n: u32, k: i64) -> Complex<F> {
    <Complex<F> as RootField>::root_of_unity(n, k)
}

/// z^p on the principal branch. Values on the negative real axis are taken
/// from above, whatever the sign of the zero imaginary part.
pub fn principal_pow<F: Real>(z: Complex<F>, p: F) -> Complex<F> {
    if z.re == F::zero() && z.im == F::zero() {
        return if p == F::zero() { Complex::new(F::one(), F::zero()) } else { z };
    }
    let z = if z.im == F::zero() { Complex::new(z.re, F::zero()) } else { z };
    (z.ln() * p).exp()
}

fn pole_check<F: Real>(v: Complex<F>, what: &str) -> Result<()> {
    if v.norm() <= re::<F>(1e3) * F::epsilon() {
        return Err(Error::Pole(format!("{what} vanishes")));
    }
    Ok(())
}

/// Δ(x) = (1 − x^N)^{1/N}.
pub fn delta_fn<F: Real>(x: Complex<F>, n: u32) -> Complex<F> {
    let one = Complex::new(F::one(), F::zero());
    principal_pow(one - x.powi(n as i32), F::one() / re(n as f64))
}

/// d(x) = (1 − x^N)^{(N−1)/(2N)} ∏_{k=1}^{N−1} (1 − ζ^k x)^{−k/N}.
pub fn d_fn<F: Real>(x: Complex<F>, n: u32) -> Result<Complex<F>> {
    let one = Complex::new(F::one(), F::zero());
    let nf: F = re(n as f64);
    let base = one - x.powi(n as i32);
    pole_check(base, "1 − x^N")?;
    let mut r = principal_pow(base, (nf - F::one()) / (nf + nf));
    for k in 1..n {
        r = r * principal_pow(one - unit::<F>(n, -(k as i64)) * x, -re::<F>(k as f64) / nf);
    }
    Ok(r)
}

fn check_constraint<F: Real>(x: Complex<F>, y: Complex<F>, n: u32) -> Result<()> {
    let xn = x.powi(n as i32);
    let yn = y.powi(n as i32);
    let scale = F::one().max(xn.norm() + yn.norm());
    let dev = (xn + yn - F::one()).norm() / scale;
    if dev > re(1e-10) {
        return Err(Error::InvalidInput(format!("x^N + y^N = 1 violated by {:e}", dev.to_f64().unwrap_or(f64::NAN))));
    }
    Ok(())
}

/// w(x,y|0) = y^{(1−N)/2} ∏_{j=1}^{N−1} (1 − ω^{−j}x)^{j/N}, without the constraint check.
fn w0<F: Real>(x: Complex<F>, y: Complex<F>, n: u32) -> Result<Complex<F>> {
    let one = Complex::new(F::one(), F::zero());
    let nf: F = re(n as f64);
    pole_check(y, "y")?;
    let mut r = principal_pow(y, (F::one() - nf) / re(2.0));
    for j in 1..n {
        r = r * principal_pow(one - unit::<F>(n, -(j as i64)) * x, re::<F>(j as f64) / nf);
    }
    Ok(r)
}

fn w_unchecked<F: Real>(x: Complex<F>, y: Complex<F>, k: i64, n: u32) -> Result<Complex<F>> {
    let one = Complex::new(F::one(), F::zero());
    let mut r = w0(x, y, n)?;
    for j in 1..=k.rem_euclid(n as i64) {
        let den = one - unit::<F>(n, j) * x;
        pole_check(den, "1 − ω^j x")?;
        r = r * y / den;
    }
    Ok(r)
}

/// w(x,y|k) = w(x,y|0) ∏_{j=1}^{k mod N} y/(1 − ω^j x), for x^N + y^N = 1.
pub fn w_fn<F: Real>(x: Complex<F>, y: Complex<F>, k: i64, n: u32) -> Result<Complex<F>> {
    check_constraint(x, y, n)?;
    w_unchecked(x, y, k, n)
}

/// w(x,k) = w(x, Δ(x)|k).
pub fn w_multival<F: Real>(x: Complex<F>, k: i64, n: u32) -> Result<Complex<F>> {
    w_unchecked(x, delta_fn(x, n), k, n)
}

/// (x/y)^a evaluated as x^a·y^{−a}.
pub(crate) fn ratio_pow<F: Real>(x: Complex<F>, y: Complex<F>, a: F) -> Complex<F> {
    principal_pow(x, a) * principal_pow(y, -a)
}

/// λ(x,y) = (x/y)^{(N−1)/2}/w(x,y|0) · Σ_k 1/w(y,x|k).
pub fn lambda_fn<F: Real>(x: Complex<F>, y: Complex<F>, n: u32) -> Result<Complex<F>> {
    check_constraint(x, y, n)?;
    let a = (re::<F>(n as f64) - F::one()) / re(2.0);
    let mut s = Complex::new(F::zero(), F::zero());
    for k in 0..n as i64 {
        s = s + w_unchecked(y, x, k, n)?.inv();
    }
    Ok(ratio_pow(x, y, a) / w0(x, y, n)? * s)
}

/// N ∏_{j=1}^{N−1} (1 − ω^{−j})^{−j/N}, the value of λ(x,y) as x → 1.
pub fn lambda_at_one<F: Real>(n: u32) -> Complex<F> {
    let one = Complex::new(F::one(), F::zero());
    let nf: F = re(n as f64);
    let mut r = Complex::new(nf, F::zero());
    for j in 1..n {
        r = r * principal_pow(one - unit::<F>(n, -(j as i64)), -re::<F>(j as f64) / nf);
    }
    r
}

/// Which side of the q-product asymptotics to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QyForm {
    /// (x;q²)_∞ e^{Li₂(x^N)/ε} → √(1−x^N) ∏(1−ζ^k x)^{−k/N}.
    Plain,
    /// (−qY;q²)_∞ e^{Li₂(−Y^N)/ε} → d(ζ^{1/2}Y).
    Shifted,
}

#[derive(Clone, Debug, Serialize)]
pub struct QyPoint {
    pub eps: f64,
    pub terms: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct QyLimitReport {
    pub n: u32,
    pub x: [f64; 2],
    pub form: QyForm,
    pub points: Vec<QyPoint>,
    pub monotone: bool,
    pub final_residual: f64,
    pub pass: bool,
}

/// Σ_k log(1 − x q^k) until the terms drop below 1e-18.
fn log_qpoch(x: Complex<f64>, q: Complex<f64>) -> Result<(Complex<f64>, usize)> {
    let mut s = Complex::new(0.0, 0.0);
    let mut t = x;
    let mut k = 0;
    while t.norm() > 1e-18 {
        let f = 1.0 - t;
        if f.norm() < 1e-14 {
            return Err(Error::Pole("a factor of the q-product vanishes".into()));
        }
        s += f.ln();
        t *= q;
        k += 1;
        if k > 200_000_000 {
            return Err(Error::InvalidInput("q-product truncation diverges".into()));
        }
    }
    Ok((s, k))
}

/// Residuals of the ε → 0 asymptotics of the q-product with
/// q = −e^{−ε/(2N²)} ζ^{1/2}, along the given ε sequence.
pub fn limit_qy_check(x: Complex<f64>, n: u32, eps: &[f64], form: QyForm) -> Result<QyLimitReport> {
    if x.norm() >= 1.0 {
        return Err(Error::InvalidInput("|x| must be below 1".into()));
    }
    if eps.iter().any(|&e| e <= 0.0) {
        return Err(Error::InvalidInput("ε must be positive".into()));
    }
    let nf = n as f64;
    let zeta_half = unit::<f64>(2 * n, -1);
    let mut points = Vec::with_capacity(eps.len());
    for &e in eps {
        let q = -(-e / (2.0 * nf * nf)).exp() * zeta_half;
        let (lhs, rhs, terms) = match form {
            QyForm::Plain => {
                let (s, k) = log_qpoch(x, q * q)?;
                let lhs = (s + li2(x.powi(n as i32)) / e).exp();
                let mut rhs = principal_pow(1.0 - x.powi(n as i32), 0.5);
                for k in 1..n {
                    rhs *= principal_pow(1.0 - unit::<f64>(n, -(k as i64)) * x, -(k as f64) / nf);
                }
                (lhs, rhs, k)
            }
            QyForm::Shifted => {
                let (s, k) = log_qpoch(-q * x, q * q)?;
                let lhs = (s + li2(-x.powi(n as i32)) / e).exp();
                (lhs, d_fn(zeta_half * x, n)?, k)
            }
        };
        points.push(QyPoint { eps: e, terms, residual: (lhs - rhs).norm() });
    }
    let monotone = points.windows(2).all(|w| w[1].residual <= w[0].residual);
    let final_residual = points.last().map_or(0.0, |p| p.residual);
    Ok(QyLimitReport {
        n,
        x: [x.re, x.im],
        form,
        monotone,
        final_residual,
        pass: monotone && final_residual <= 1e-3,
        points,
    })
}
