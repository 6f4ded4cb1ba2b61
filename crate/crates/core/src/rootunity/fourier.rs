use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

use super::functions::{d_fn, delta_fn, lambda_fn, ratio_pow, unit, w_fn};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityFamily {
    pub name: &'static str,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierWReport {
    pub n: u32,
    pub families: Vec<IdentityFamily>,
    pub pass: bool,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// (a;ω)_k = ∏_{j=0}^{k−1} (1 − aω^j).
fn qpoch(a: Complex64, w: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (1.0 - a * w.powi(j as i32)))
}

/// Relative gap in Σ_k (b;ω)_k z^k = (bz/ω)^{N−1} Σ_k (ω/z;ω)_k (ω/b)^k.
pub fn omega_identity_gap(n: u32, b: Complex64, z: Complex64) -> f64 {
    let w = unit::<f64>(n, 1);
    let m = n as usize;
    let lhs: Complex64 = (0..m).map(|k| qpoch(b, w, k) * z.powi(k as i32)).sum();
    let sum: Complex64 = (0..m).map(|k| qpoch(w / z, w, k) * (w / b).powi(k as i32)).sum();
    rel(lhs, (b * z / w).powi(n as i32 - 1) * sum)
}

/// Relative gap in Σ_k w(x,y|k)ω^{nk} = N (x/y)^{(N−1)/2} / (λ(y,x) w(y,x|n−1)), worst over n.
pub fn fourier_w_gap(n: u32, x: Complex64, y: Complex64) -> Result<f64> {
    let w = unit::<f64>(n, 1);
    let a = (n as f64 - 1.0) / 2.0;
    let lam = lambda_fn(y, x, n)?;
    let mut worst = 0.0f64;
    for m in 0..n as i64 {
        let mut lhs = Complex64::new(0.0, 0.0);
        for k in 0..n as i64 {
            lhs += w_fn(x, y, k, n)? * w.powi((m * k) as i32);
        }
        let rhs = n as f64 * ratio_pow(x, y, a) / lam / w_fn(y, x, m - 1, n)?;
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(worst)
}

/// Relative gap in Σ_k ω^{−nk}/w(x,y|k) = ω^n w(yω^n, x|0) (x/y)^{(N−1)/2} λ(x,y), worst over n.
pub fn w_inverse_gap(n: u32, x: Complex64, y: Complex64) -> Result<f64> {
    let w = unit::<f64>(n, 1);
    let a = (n as f64 - 1.0) / 2.0;
    let lam = lambda_fn(x, y, n)?;
    let mut worst = 0.0f64;
    for m in 0..n as i64 {
        let mut lhs = Complex64::new(0.0, 0.0);
        for k in 0..n as i64 {
            lhs += w.powi((-m * k) as i32) / w_fn(x, y, k, n)?;
        }
        let wm = w.powi(m as i32);
        let rhs = wm * w_fn(y * wm, x, 0, n)? * ratio_pow(x, y, a) * lam;
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(worst)
}

/// Worst relative gap over w(x,y|n+N) = w(x,y|n), w(x,y|n) = w(ω^n x,y|0),
/// ∏_k w(x,y|k) = 1, w(x,Δ(x)|0) = 1/d(x) and λ(x,ωy) = λ(x,y).
pub fn structural_gap(n: u32, x: Complex64, y: Complex64) -> Result<f64> {
    let w = unit::<f64>(n, 1);
    let one = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    let mut prod = one;
    for k in 0..n as i64 {
        let v = w_fn(x, y, k, n)?;
        prod *= v;
        worst = worst.max(rel(w_fn(x, y, k + n as i64, n)?, v));
        worst = worst.max(rel(w_fn(w.powi(k as i32) * x, y, 0, n)?, v));
    }
    worst = worst.max(rel(prod, one));
    worst = worst.max(rel(w_fn(x, delta_fn(x, n), 0, n)? * d_fn(x, n)?, one));
    worst = worst.max(rel(lambda_fn(x, w * y, n)?, lambda_fn(x, y, n)?));
    Ok(worst)
}

/// Draws x with |arg x| < π/(2N) and y = Δ(x) such that also x = Δ(y), both of modulus ≤ 0.95.
pub fn sample_admissible(n: u32, rng: &mut impl Rng) -> (Complex64, Complex64) {
    loop {
        let x = Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(-PI / (2.0 * n as f64)..PI / (2.0 * n as f64)));
        let y = delta_fn(x, n);
        if y.norm() <= 0.95 && (delta_fn(y, n) - x).norm() < 1e-12 {
            return (x, y);
        }
    }
}

fn family(name: &'static str, devs: Vec<f64>, tol: f64) -> IdentityFamily {
    let max_deviation = devs.iter().cloned().fold(0.0, f64::max);
    IdentityFamily { name, samples: devs.len(), max_deviation, tolerance: tol, pass: max_deviation <= tol && devs.iter().all(|d| d.is_finite()) }
}

/// Checks the four identity families on `samples` random admissible points.
pub fn fourier_w_check(n: u32, samples: usize, seed: u64) -> Result<FourierWReport> {
    if !(2..=12).contains(&n) {
        return Err(Error::InvalidInput("fourier_w_check needs 2 ≤ N ≤ 12".into()));
    }
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut a, mut b, mut c, mut d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for _ in 0..samples {
        let bz = |rng: &mut ChaCha8Rng| Complex64::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(-PI..PI));
        let (pb, pz) = (bz(&mut rng), bz(&mut rng));
        a.push(omega_identity_gap(n, pb, pz));
        let (x, y) = sample_admissible(n, &mut rng);
        b.push(w_inverse_gap(n, x, y)?);
        c.push(fourier_w_gap(n, x, y)?);
        d.push(structural_gap(n, x, y)?);
    }
    let families = vec![
        family("omega_identity", a, tol),
        family("w_inverse", b, tol),
        family("fourier_w", c, tol),
        family("structural", d, tol),
    ];
    let pass = families.iter().all(|f| f.pass);
    Ok(FourierWReport { n, families, pass })
}
