use std::cell::RefCell;

use num_complex::Complex64;
use quadrature::double_exponential;

use crate::error::{Error, Result};

/// ∫_{t0}^{t1} g(t) dt for a complex integrand, split into pieces of length ≤ 2.
pub(crate) fn integrate_line(g: impl Fn(f64) -> Result<Complex64>, t0: f64, t1: f64, tol: f64) -> Result<Complex64> {
    let err = RefCell::new(None);
    let eval = |t: f64| match g(t) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let pieces = ((t1 - t0) / 2.0).ceil().max(1.0) as usize;
    let h = (t1 - t0) / pieces as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..pieces {
        let (a, b) = (t0 + h * k as f64, t0 + h * (k + 1) as f64);
        let re = double_exponential::integrate(|t| eval(t).re, a, b, tol);
        let im = double_exponential::integrate(|t| eval(t).im, a, b, tol);
        if !re.integral.is_finite() || !im.integral.is_finite() {
            return Err(Error::InvalidInput("quadrature produced a non-finite value".into()));
        }
        acc += Complex64::new(re.integral, im.integral);
    }
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Smallest radius R (in steps of 1) with |g(±R)| below `tol`, searched up to `max`.
pub(crate) fn tail_radius(g: impl Fn(f64) -> Result<Complex64>, tol: f64, max: f64) -> Result<f64> {
    let mut r = 4.0;
    while r <= max {
        if g(r)?.norm() < tol && g(-r)?.norm() < tol && g(r + 1.0)?.norm() < tol && g(-r - 1.0)?.norm() < tol {
            return Ok(r + 1.0);
        }
        r += 1.0;
    }
    Err(Error::InvalidInput(format!("integrand does not decay within radius {max}")))
}
