use num_complex::{Complex, Complex64};
use num_traits::{Float, FloatConst};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::faddeev::{faddeev_phi, theta, DilogParams};
use super::quad::{integrate_line, tail_radius};

/// Picks a contour direction e^{iα}, −π/2 < α < 0, along which
/// Φ(z + shift)e^{2πiwz} decays at both ends.
fn contour_angle(w: Complex64, p: &DilogParams<f64>) -> Result<f64> {
    let b = p.b();
    for k in [8.0, 16.0, 6.0, 5.0, 4.0, 3.0] {
        let a = -PI / k;
        let e = Complex64::from_polar(1.0, a);
        if (b * e).re > 0.05 && (e / b).re > 0.05 && (w * e).im < -1e-3 {
            return Ok(a);
        }
    }
    Err(Error::InvalidInput(format!("no decaying contour for w = {w}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ContourIntegral {
    pub value: [f64; 2],
    pub angle: f64,
    pub radius: f64,
}

/// ∫ Φ(z + shift)·e^{2πiwz} dz along a tilted line through 0, truncated where
/// the integrand drops below 1e-13.
pub fn fourier_integral(w: Complex64, shift: f64, p: &DilogParams<f64>) -> Result<ContourIntegral> {
    let angle = contour_angle(w, p)?;
    let e = Complex64::from_polar(1.0, angle);
    let g = |t: f64| {
        let z = e * t;
        Ok(faddeev_phi(z + shift, p)? * (2.0 * PI * Complex64::i() * w * z).exp() * e)
    };
    let radius = tail_radius(g, 1e-13, 400.0)?;
    let v = integrate_line(g, -radius, radius, 1e-13)?;
    Ok(ContourIntegral { value: [v.re, v.im], angle, radius })
}

/// The closed forms Φ(−w−c_b)e^{iπw² − iπ(1−4c_b²)/12} and
/// e^{−2πiwc_b + iπ(1−4c_b²)/12}/Φ(w+c_b) of ∫Φ(z)e^{2πiwz}dz.
pub fn fourier_closed_forms<F: Float + FloatConst>(w: Complex<F>, p: &DilogParams<F>) -> Result<(Complex<F>, Complex<F>)> {
    let i = Complex::<F>::i();
    let pi = F::PI();
    let cb = p.cb();
    let twelve = F::from(12.0).unwrap();
    let four = F::from(4.0).unwrap();
    let k = (-(cb * cb * four) + F::one()) * pi / twelve;
    let first = faddeev_phi(-w - cb, p)? * (i * pi * w * w - i * k).exp();
    let two = F::one() + F::one();
    let second = (-(i * w * cb * pi * two) + i * k).exp() / faddeev_phi(w + cb, p)?;
    Ok((first, second))
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierReport {
    pub w: [f64; 2],
    pub integral: ContourIntegral,
    pub closed_form: [f64; 2],
    /// |quadrature − closed form| / |closed form|.
    pub deviation: f64,
    /// Relative distance between the two closed forms.
    pub identity_deviation: f64,
    pub pass: bool,
}

/// Compares the quadrature of ∫Φ(z)e^{2πiwz}dz with its closed forms.
pub fn fourier_transform_check(w: Complex64, p: &DilogParams<f64>) -> Result<FourierReport> {
    let integral = fourier_integral(w, 0.0, p)?;
    let (a, b) = fourier_closed_forms(w, p)?;
    let lhs = Complex64::new(integral.value[0], integral.value[1]);
    let deviation = (lhs - b).norm() / b.norm();
    let identity_deviation = (a - b).norm() / b.norm();
    Ok(FourierReport {
        w: [w.re, w.im],
        integral,
        closed_form: [b.re, b.im],
        deviation,
        identity_deviation,
        pass: deviation <= 1e-5 && identity_deviation <= 1e-10,
    })
}

/// Parameters of the infinite-dimensional representation: the split
/// c = c′ + c″ of the central element and b.
#[derive(Clone, Copy, Debug)]
pub struct RInfiniteParams<F> {
    pub c1: F,
    pub c2: F,
    pub dilog: DilogParams<F>,
}

impl<F: Float> RInfiniteParams<F> {
    pub fn c(&self) -> F {
        self.c1 + self.c2
    }
}

/// ⟨x₁,x₂|R|x₁′,x₂′⟩ in closed form, `x = [x₁, x₂, x₁′, x₂′]`.
pub fn r_infinite_element<F: Float + FloatConst>(x: [F; 4], p: &RInfiniteParams<F>) -> Result<Complex<F>> {
    let c = |v: F| Complex::new(v, F::zero());
    let [x1, x2, y1, y2] = x;
    let d = &p.dilog;
    let cb = d.cb();
    let num = faddeev_phi(c(x1 - x2), d)? * faddeev_phi(c(y2 - y1), d)?;
    let den = faddeev_phi(c(x1 - y1) + cb, d)? * faddeev_phi(c(y2 - x2) + cb, d)?;
    let two = F::one() + F::one();
    let twelve = F::from(12.0).unwrap();
    let phase = cb * (y1 - y2 - x1 + x2)
        + c(p.c1 * (y2 - x1) + p.c2 * (x2 - y1))
        + (-(cb * cb * (two * two)) + F::one()) / twelve
        - c(p.c() * p.c() / two);
    Ok(num / den * (Complex::<F>::i() * F::PI() * two * phase).exp())
}

/// The same element from its defining momentum integrals:
/// Φ(x₁−x₂)Φ(x₁′−x₂′)^{−1}θ(c+x₁′−x₂′)·∫Φ(p+c′)e^{2πip(x₁−x₁′)}dp·∫Φ(−p+c″)e^{2πip(x₂−x₂′)}dp,
/// each integral by quadrature. Needs x₁ > x₁′ and x₂′ > x₂ for convergence.
pub fn r_infinite_quadrature(x: [f64; 4], p: &RInfiniteParams<f64>) -> Result<Complex64> {
    let [x1, x2, y1, y2] = x;
    if x1 <= y1 || y2 <= x2 {
        return Err(Error::InvalidInput("quadrature needs x1 > x1' and x2' > x2".into()));
    }
    let d = &p.dilog;
    let c = |v: f64| Complex64::new(v, 0.0);
    let pre = faddeev_phi(c(x1 - x2), d)? / faddeev_phi(c(y1 - y2), d)? * theta(c(p.c() + y1 - y2), d);
    let i1 = fourier_integral(c(x1 - y1), p.c1, d)?;
    // p → −p turns the second integral into ∫Φ(s + c″)e^{2πis(x₂′−x₂)}ds
    let i2 = fourier_integral(c(y2 - x2), p.c2, d)?;
    Ok(pre * Complex64::new(i1.value[0], i1.value[1]) * Complex64::new(i2.value[0], i2.value[1]))
}
