use num_complex::{Complex, Complex64};
use num_traits::{Float, FloatConst};
use serde::Serialize;

use crate::error::{Error, Result};

use super::dilog::li2;

fn f<F: Float>(x: f64) -> F {
    F::from(x).unwrap()
}

/// The deformation parameter b with q = e^{πib²}, q̄ = e^{−πib^{−2}} and
/// c_b = (i/2)(b + b^{−1}).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DilogParams<F> {
    b: Complex<F>,
}

impl<F: Float + FloatConst> DilogParams<F> {
    /// Product mode; requires Im b² > 0 so that |q|, |q̄| < 1.
    pub fn new(b: Complex<F>) -> Result<Self> {
        if (b * b).im <= F::zero() {
            return Err(Error::InvalidInput("Im b² must be positive".into()));
        }
        Ok(DilogParams { b })
    }

    pub fn b(&self) -> Complex<F> {
        self.b
    }

    pub fn q(&self) -> Complex<F> {
        (Complex::i() * F::PI() * self.b * self.b).exp()
    }

    pub fn qbar(&self) -> Complex<F> {
        (-Complex::i() * F::PI() / (self.b * self.b)).exp()
    }

    pub fn cb(&self) -> Complex<F> {
        Complex::i() * f::<F>(0.5) * (self.b + self.b.inv())
    }
}

/// log θ(z) = −πiz² + πi(1 + 2c_b²)/6.
pub fn log_theta<F: Float + FloatConst>(z: Complex<F>, p: &DilogParams<F>) -> Complex<F> {
    let i = Complex::i();
    let cb = p.cb();
    -i * F::PI() * z * z + i * F::PI() * (cb * cb * f::<F>(2.0) + F::one()) / f::<F>(6.0)
}

/// θ(z) = Φ(z)Φ(−z).
pub fn theta<F: Float + FloatConst>(z: Complex<F>, p: &DilogParams<F>) -> Complex<F> {
    log_theta(z, p).exp()
}

/// Σ_k log(1 − x q^k) with principal logarithms.
fn log_qpoch<F: Float>(x: Complex<F>, q: Complex<F>, what: &str) -> Result<Complex<F>> {
    let one = Complex::new(F::one(), F::zero());
    let eps = F::epsilon();
    let mut acc = Complex::new(F::zero(), F::zero());
    let mut t = x;
    let mut k = 0u64;
    while t.norm() > eps * f(0.01) {
        let factor = one - t;
        if factor.norm() < eps * f(1e3) {
            return Err(Error::Pole(format!("{what} of the product vanishes")));
        }
        acc = acc + factor.ln();
        t = t * q;
        k += 1;
        if k > 50_000_000 {
            return Err(Error::InvalidInput("product does not converge; |q| too close to 1".into()));
        }
    }
    Ok(acc)
}

fn log_phi_direct<F: Float + FloatConst>(z: Complex<F>, p: &DilogParams<F>) -> Result<Complex<F>> {
    let two_pi = F::PI() + F::PI();
    let (q, qb) = (p.q(), p.qbar());
    let num = log_qpoch(-qb * (z * two_pi / p.b).exp(), qb * qb, "a zero")?;
    let den = log_qpoch(-q * (p.b * z * two_pi).exp(), q * q, "a pole")?;
    Ok(num - den)
}

/// log Φ(z) from the q-product, continuous in z: the product is summed only
/// where |e^{2πbz}| ≤ 1, and Φ(z) = θ(z)/Φ(−z) is used elsewhere.
pub fn faddeev_log_phi<F: Float + FloatConst>(z: Complex<F>, p: &DilogParams<F>) -> Result<Complex<F>> {
    let two_pi = F::PI() + F::PI();
    let growth = (p.b * z).re * two_pi;
    if growth.abs() > f(700.0) {
        return Err(Error::InvalidInput("|z| too large for the product".into()));
    }
    if growth > F::zero() {
        Ok(log_theta(z, p) - log_phi_direct(-z, p)?)
    } else {
        log_phi_direct(z, p)
    }
}

/// The Faddeev quantum dilogarithm Φ(z) = (−q̄e^{2πz/b}; q̄²)_∞ / (−qe^{2πbz}; q²)_∞.
pub fn faddeev_phi<F: Float + FloatConst>(z: Complex<F>, p: &DilogParams<F>) -> Result<Complex<F>> {
    Ok(faddeev_log_phi(z, p)?.exp())
}

/// Sign s in Φ(0) = s·e^{−πi(b²+b^{−2})/24}, fixed by evaluating the integral
/// representation at real b.
pub const PHI_ZERO_SIGN: f64 = 1.0;

/// Φ(z) from its integral representation over ℝ + iε, for Re b > 0 and
/// Re b^{−1} > 0 (real b included) in the strip |Im z| < Im c_b.
pub fn faddeev_phi_integral(z: Complex64, b: Complex64) -> Result<Complex64> {
    let binv = b.inv();
    if b.re <= 0.0 || binv.re <= 0.0 {
        return Err(Error::InvalidInput("integral mode needs Re b > 0 and Re 1/b > 0".into()));
    }
    let decay = b.re + binv.re;
    let margin = decay - 2.0 * z.im.abs();
    if margin <= 0.0 {
        return Err(Error::InvalidInput("z outside the strip |Im z| < Im c_b".into()));
    }
    // nearest singularities above the axis: iπ/b and iπb
    let eps = 0.5 * std::f64::consts::PI * (b.re / b.norm_sqr()).min(b.re);
    let integrand = |t: f64| {
        let w = Complex64::new(t, eps);
        (-2.0 * Complex64::i() * z * w).exp() / ((b * w).sinh() * (w * binv).sinh() * w)
    };
    let radius = (45.0 + 2.0 * z.re.abs() * eps) / margin;
    let i = super::quad::integrate_line(|t| Ok(integrand(t)), -radius, radius, 1e-15)?;
    Ok((-0.25 * i).exp())
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub(crate) fn from_devs(name: &str, devs: &[f64], tolerance: f64) -> Self {
        let max = devs.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        IdentityCheck { name: name.into(), samples: devs.len(), max_deviation: max, tolerance, pass: max <= tolerance }
    }
}

/// |Φ(z)Φ(−z)/θ(z) − 1| over the given points.
pub fn inversion_check(p: &DilogParams<f64>, zs: &[Complex64]) -> Result<IdentityCheck> {
    let mut devs = Vec::new();
    for &z in zs {
        let r = faddeev_phi(z, p)? * faddeev_phi(-z, p)? / theta(z, p);
        devs.push((r - 1.0).norm());
    }
    Ok(IdentityCheck::from_devs("inversion", &devs, 1e-9))
}

/// Φ(z ± ib) = (1 + e^{2πbz}q^{±1})^{±1}Φ(z), both signs, relative deviation.
pub fn shift_check(p: &DilogParams<f64>, zs: &[Complex64]) -> Result<IdentityCheck> {
    let (b, q) = (p.b(), p.q());
    let i = Complex64::i();
    let mut devs = Vec::new();
    for &z in zs {
        let e = (2.0 * std::f64::consts::PI * b * z).exp();
        let phi = faddeev_phi(z, p)?;
        let up = faddeev_phi(z + i * b, p)?;
        let down = faddeev_phi(z - i * b, p)?;
        let want_up = (1.0 + e * q) * phi;
        let want_down = phi / (1.0 + e / q);
        devs.push((up - want_up).norm() / want_up.norm());
        devs.push((down - want_down).norm() / want_down.norm());
    }
    Ok(IdentityCheck::from_devs("shift", &devs, 1e-8))
}

/// A square grid of `n × n` points in [−r, r] + i[−r_im, r_im].
pub fn grid(n: usize, r: f64, r_im: f64) -> Vec<Complex64> {
    let step = |k: usize, s: f64| if n == 1 { 0.0 } else { -s + 2.0 * s * k as f64 / (n - 1) as f64 };
    (0..n).flat_map(|a| (0..n).map(move |c| Complex64::new(step(a, r), step(c, r_im)))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitPoint {
    pub t: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalLimitReport {
    pub z: [f64; 2],
    pub tilt: f64,
    pub points: Vec<LimitPoint>,
    pub monotone: bool,
    pub final_residual: f64,
    pub pass: bool,
}

/// Residual |−2πib²·log Φ(z/(2πb)) − Li₂(−e^z)| along b = t·e^{i·tilt}.
/// Passes when the residuals decrease and the last one is at most 1e-2.
pub fn classical_limit_check(z: Complex64, ts: &[f64], tilt: f64) -> Result<ClassicalLimitReport> {
    if ts.is_empty() {
        return Err(Error::InvalidInput("empty t sequence".into()));
    }
    let target = li2(-z.exp());
    let mut points = Vec::new();
    for &t in ts {
        let b = Complex64::from_polar(t, tilt);
        let p = DilogParams::new(b)?;
        let lp = faddeev_log_phi(z / (2.0 * std::f64::consts::PI * b), &p)?;
        let lhs = -2.0 * Complex64::i() * std::f64::consts::PI * b * b * lp;
        points.push(LimitPoint { t, residual: (lhs - target).norm() });
    }
    let monotone = points.windows(2).all(|w| w[1].residual < w[0].residual);
    let final_residual = points.last().map(|p| p.residual).unwrap_or(f64::NAN);
    Ok(ClassicalLimitReport {
        z: [z.re, z.im],
        tilt,
        points,
        monotone,
        final_residual,
        pass: monotone && final_residual <= 1e-2,
    })
}
