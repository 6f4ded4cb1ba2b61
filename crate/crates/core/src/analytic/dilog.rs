use num_complex::Complex;
use num_traits::{Float, FloatConst};
use serde::Serialize;

use crate::braid::r_y_window;
use crate::error::{Error, Result};

/// B_{2k}/(2k+1)!.
const BERNOULLI: [f64; 10] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
];

fn f<F: Float>(x: f64) -> F {
    F::from(x).unwrap()
}

/// Li₂ as a series in u = −log(1−z): u − u²/4 + Σ B_{2k}u^{2k+1}/(2k+1)!.
fn bernoulli_series<F: Float + FloatConst>(u: Complex<F>) -> Complex<F> {
    let u2 = u * u;
    let mut acc = u - u2 * f::<F>(0.25);
    let mut p = u;
    for b in BERNOULLI {
        p = p * u2;
        let t = p * f::<F>(b);
        acc = acc + t;
        if t.norm() < F::epsilon() * acc.norm() {
            break;
        }
    }
    acc
}

/// The principal branch of the dilogarithm. On the cut (1, ∞) the value
/// below the cut is returned.
pub fn li2<F: Float + FloatConst>(z: Complex<F>) -> Complex<F> {
    let one = Complex::new(F::one(), F::zero());
    let zeta2 = F::PI() * F::PI() / f(6.0);
    if z == Complex::new(F::zero(), F::zero()) {
        return z;
    }
    if z == one {
        return Complex::new(zeta2, F::zero());
    }
    let half = f::<F>(0.5);
    let nz = z.norm_sqr();
    let inverted = |z: Complex<F>| {
        let l = (-z).ln();
        -bernoulli_series(-(one - z.inv()).ln()) - zeta2 - l * l * half
    };
    if z.re <= half {
        if nz > F::one() {
            inverted(z)
        } else {
            bernoulli_series(-(one - z).ln())
        }
    } else if nz <= z.re + z.re {
        -bernoulli_series(-z.ln()) + zeta2 - z.ln() * (one - z).ln()
    } else {
        inverted(z)
    }
}

/// D(z) = Im Li₂(z) + arg(1−z)·log|z|; identically zero on the real axis.
pub fn bloch_wigner<F: Float + FloatConst>(z: Complex<F>) -> F {
    if z.im == F::zero() {
        return F::zero();
    }
    li2(z).im + (Complex::new(F::one(), F::zero()) - z).arg() * z.norm().ln()
}

/// D(x) + D(y) + D((1−x)/(1−xy)) + D(1−xy) + D((1−y)/(1−xy)), which vanishes identically.
pub fn five_term_gap<F: Float + FloatConst>(x: Complex<F>, y: Complex<F>) -> F {
    let one = Complex::new(F::one(), F::zero());
    let xy = one - x * y;
    bloch_wigner(x) + bloch_wigner(y) + bloch_wigner((one - x) / xy) + bloch_wigner(xy) + bloch_wigner((one - y) / xy)
}

/// The three shape parameters z, z′ = 1 − 1/z, z″ = 1/(1 − z) of an ideal tetrahedron.
pub fn tet_shape<F: Float>(z: Complex<F>) -> Result<[Complex<F>; 3]> {
    let one = Complex::new(F::one(), F::zero());
    if z.norm() == F::zero() || z == one {
        return Err(Error::InvalidInput("degenerate shape parameter".into()));
    }
    Ok([z, one - z.inv(), (one - z).inv()])
}

#[derive(Clone, Debug, Serialize)]
pub struct OctahedronVolume {
    /// The four Bloch–Wigner terms in the order D(−1/y₄), D(ỹ₁/y₁), D(−ỹ₄), D(ỹ₇/y₇).
    pub terms: [f64; 4],
    pub volume: f64,
}

/// Signed hyperbolic volume of the octahedron attached to ỹ = R(y) on the
/// window y₁…y₇.
pub fn octahedron_volume<F: Float + FloatConst + std::fmt::Debug + Send + Sync + 'static>(
    y: &[Complex<F>; 7],
) -> Result<OctahedronVolume> {
    let mut yt = Vec::with_capacity(7);
    for r in r_y_window() {
        yt.push(r.eval(&y[..]).ok_or_else(|| Error::InvalidInput("degenerate y: a denominator vanishes".into()))?);
    }
    let zero = Complex::new(F::zero(), F::zero());
    if [y[0], y[3], y[6]].contains(&zero) {
        return Err(Error::InvalidInput("degenerate y: zero entry".into()));
    }
    let args = [-y[3].inv(), yt[0] / y[0], -yt[3], yt[6] / y[6]];
    let terms = args.map(|z| bloch_wigner(z).to_f64().unwrap_or(f64::NAN));
    Ok(OctahedronVolume { terms, volume: terms.iter().sum() })
}
