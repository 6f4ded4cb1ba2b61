use num_complex::{Complex, Complex32, Complex64};
use proptest::prelude::*;
use qbraid::analytic::*;
use qbraid::cluster::{ExchangeMatrix, Seed, YSeed};
use qbraid::RatFunc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// mpmath polylog(2, z) at 30 digits
const LI2_TABLE: [(f64, f64, f64, f64); 7] = [
    (0.3, 0.4, 0.26659686674274041589, 0.46136289181910899428),
    (-2.0, 1.0, -1.4890920430306578229, 0.54093100319857905892),
    (0.9, 0.05, 1.2898324980216134142, 0.12612490025403634899),
    (5.0, -3.0, 0.033260008208192192025, -4.6816673723804519905),
    (-0.5, -0.5, -0.48347280636107851504, -0.40015615374200757019),
    (1.5, 0.2, 1.9895165024320543494, 1.3877273367410741257),
    (0.6, -0.9, 0.34555278900208864958, -1.1007099952993049361),
];

#[test]
fn li2_reference_values() {
    for (x, y, re, im) in LI2_TABLE {
        let v = li2(c(x, y));
        assert!((v - c(re, im)).norm() < 1e-13, "{x}+{y}i: {v}");
    }
    assert!((li2(c(1.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-15);
    assert!((li2(c(-1.0, 0.0)).re + PI * PI / 12.0).abs() < 1e-14);
    assert_eq!(li2(c(0.0, 0.0)), c(0.0, 0.0));
}

#[test]
fn li2_in_single_precision() {
    for (x, y, re, im) in LI2_TABLE {
        let v = li2(Complex32::new(x as f32, y as f32));
        assert!((v.re as f64 - re).abs() < 1e-5 && (v.im as f64 - im).abs() < 1e-5);
    }
}

fn off_axis() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, 0.05..3.0f64, prop::bool::ANY).prop_map(|(x, y, s)| c(x, if s { y } else { -y }))
}

proptest! {
    #[test]
    fn li2_reflection_and_inversion(z in off_axis()) {
        let one = c(1.0, 0.0);
        let refl = li2(z) + li2(one - z) - (PI * PI / 6.0 - z.ln() * (one - z).ln());
        prop_assert!(refl.norm() < 1e-12 * (1.0 + z.norm().ln().abs()).powi(2));
        let inv = li2(z) + li2(z.inv()) + PI * PI / 6.0 + 0.5 * (-z).ln() * (-z).ln();
        prop_assert!(inv.norm() < 1e-12 * (1.0 + z.norm().ln().abs()).powi(2));
    }

    #[test]
    fn bloch_wigner_is_odd_under_conjugation(z in off_axis()) {
        prop_assert!((bloch_wigner(z) + bloch_wigner(z.conj())).abs() < 1e-13);
    }
}

/// Clausen function Cl₂(θ) = −∫₀^θ log|2 sin(t/2)| dt, by series with acceleration.
fn clausen(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t == 0.0 {
        return 0.0;
    }
    // Cl₂(θ) = θ − θ log|θ| + θ³/72 + Σ ... for small θ is awkward; use the
    // Fourier series with 200k terms plus a tail estimate.
    let n = 200_000;
    let mut s = 0.0;
    for k in 1..=n {
        let k = k as f64;
        s += (k * t).sin() / (k * k);
    }
    s
}

/// Volume of the ideal tetrahedron with shape z through its three dihedral
/// angles, Σ Л(α), Л(α) = Cl₂(2α)/2.
fn tetrahedron_volume(z: Complex64) -> f64 {
    if z.im < 0.0 {
        return -tetrahedron_volume(z.conj());
    }
    let one = c(1.0, 0.0);
    let angles = [z.arg(), (one - z).inv().arg(), (one - z.inv()).arg()];
    angles.iter().map(|a| 0.5 * clausen(2.0 * a)).sum()
}

#[test]
fn bloch_wigner_special_values() {
    for x in [0.1, 0.5, 0.93] {
        assert_eq!(bloch_wigner(c(x, 0.0)), 0.0);
    }
    for x in [-2.0, 3.5] {
        assert!(bloch_wigner(c(x, 0.0)).abs() < 1e-15);
    }
    assert!((bloch_wigner(c(0.0, 1.0)) - 0.915965594177219015).abs() < 1e-14);
    assert_eq!(bloch_wigner(c(0.0, 0.0)), 0.0);
    assert_eq!(bloch_wigner(c(1.0, 0.0)), 0.0);
    // regular ideal tetrahedron
    let z = Complex64::from_polar(1.0, PI / 3.0);
    assert!((bloch_wigner(z) - 1.0149416064096536).abs() < 1e-14);
}

#[test]
fn bloch_wigner_matches_dihedral_angle_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let d = bloch_wigner(z);
        assert!((d - tetrahedron_volume(z)).abs() < 1e-9, "{z}: {d} vs {}", tetrahedron_volume(z));
    }
}

#[test]
fn five_term_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let one = c(1.0, 0.0);
    for _ in 0..100 {
        let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let y = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let xy = one - x * y;
        let s = bloch_wigner(x) + bloch_wigner(y) + bloch_wigner((one - x) / xy) + bloch_wigner(xy) + bloch_wigner((one - y) / xy);
        assert!(s.abs() < 1e-11, "{x} {y}: {s}");
    }
}

#[test]
fn shape_parameters_multiply_to_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let [a, b, d] = tet_shape(z).unwrap();
        assert!((a * b * d + 1.0).norm() < 1e-12);
    }
    assert!(tet_shape(c(1.0, 0.0)).is_err());
    assert!(tet_shape(c(0.0, 0.0)).is_err());
}

#[test]
fn octahedron_volume_of_real_input_is_zero() {
    let y = [0.3, 1.2, 0.7, 2.0, 0.4, 0.9, 1.6].map(|v| c(v, 0.0));
    let v = octahedron_volume(&y).unwrap();
    assert!(v.volume.abs() < 1e-15);
}

#[test]
fn octahedron_volume_independent_recomputation() {
    let y = [c(0.3, 0.2), c(-0.7, 0.5), c(1.1, -0.4), c(0.2, 0.9), c(-0.4, -0.3), c(0.8, 0.1), c(0.5, 0.6)];
    let [y1, y2, _y3, y4, _y5, y6, y7] = y;
    let one = c(1.0, 0.0);
    let t1 = y1 * (one + y2 + y2 * y4);
    let t4 = y4 / ((one + y2 + y2 * y4) * (one + y6 + y4 * y6));
    let t7 = (one + y6 + y4 * y6) * y7;
    let expect = tetrahedron_volume(-y4.inv()) + tetrahedron_volume(t1 / y1) + tetrahedron_volume(-t4) + tetrahedron_volume(t7 / y7);
    let got = octahedron_volume(&y).unwrap();
    assert!((got.volume - expect).abs() < 1e-9, "{} vs {expect}", got.volume);
    let direct = bloch_wigner(-y4.inv()) + bloch_wigner(t1 / y1) + bloch_wigner(-t4) + bloch_wigner(t7 / y7);
    assert!((got.volume - direct).abs() < 1e-12);
    let degenerate = [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
    assert!(octahedron_volume(&degenerate).is_err());
}

#[test]
fn flip_is_a_tetrahedron_gluing() {
    // ỹ of a single mutation at 3 with z = −1/y₃: −ỹ₁ = −y₁z′, −ỹ₂ = −y₂z″, −ỹ₃ = z, −ỹ₄ = −y₄z″, −ỹ₅ = −y₅z′.
    let b = ExchangeMatrix::from_rows(&[
        vec![0, 0, 1, 0, 0],
        vec![0, 0, -1, 0, 0],
        vec![-1, 1, 0, 1, -1],
        vec![0, 0, -1, 0, 0],
        vec![0, 0, 1, 0, 0],
    ])
    .unwrap();
    let s = YSeed::initial(b).mutate(3).unwrap();
    let y = |k: usize| RatFunc::var(k - 1);
    let one = RatFunc::one();
    let z = y(3).inv().unwrap().neg();
    let z1 = one.sub(&z.inv().unwrap());
    let z2 = one.sub(&z).inv().unwrap();
    let want = [y(1).mul(&z1), y(2).mul(&z2), z.neg(), y(4).mul(&z2), y(5).mul(&z1)];
    for (k, w) in want.iter().enumerate() {
        assert_eq!(&s.vars()[k], w, "variable {}", k + 1);
    }
}

fn params() -> DilogParams<f64> {
    DilogParams::new(Complex64::from_polar(0.8, PI / 8.0)).unwrap()
}

#[test]
fn dilog_params_validation() {
    assert!(DilogParams::new(c(0.7, 0.0)).is_err());
    assert!(DilogParams::new(Complex64::from_polar(0.7, -0.1)).is_err());
    let p = params();
    assert!(p.q().norm() < 1.0 && p.qbar().norm() < 1.0);
}

#[test]
fn phi_regression_values() {
    // independent q-product evaluation
    let p = params();
    let v = faddeev_phi(c(0.2, 0.1), &p).unwrap();
    assert!((v - c(0.9450219557902182, -0.4555584210495572)).norm() < 1e-13);
    let v = faddeev_phi(c(-0.4, 0.05), &p).unwrap();
    assert!((v - c(0.9789929067806549, -0.026140769059412507)).norm() < 1e-13);
}

#[test]
fn phi_inversion_and_shift_on_grids() {
    let p = params();
    let inv = inversion_check(&p, &grid(7, 1.5, 0.3)).unwrap();
    assert!(inv.pass, "{inv:?}");
    let sh = shift_check(&p, &grid(5, 1.0, 0.2)).unwrap();
    assert!(sh.pass, "{sh:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-0.4..0.4));
        let r = faddeev_phi(z, &p).unwrap() * faddeev_phi(-z, &p).unwrap();
        assert!((r / theta(z, &p) - 1.0).norm() < 1e-9);
    }
}

#[test]
fn phi_single_precision() {
    let p32 = DilogParams::new(Complex::<f32>::from_polar(0.8, std::f32::consts::PI / 8.0)).unwrap();
    let v = faddeev_phi(Complex32::new(0.2, 0.1), &p32).unwrap();
    assert!((v.re - 0.94502196).abs() < 1e-4 && (v.im + 0.45555842).abs() < 1e-4);
}

#[test]
fn phi_at_zero_and_its_sign() {
    for b in [Complex64::from_polar(0.8, PI / 8.0), Complex64::from_polar(1.3, 0.2)] {
        let p = DilogParams::new(b).unwrap();
        let want = PHI_ZERO_SIGN * (-Complex64::i() * PI * (b * b + (b * b).inv()) / 24.0).exp();
        assert!((faddeev_phi(c(0.0, 0.0), &p).unwrap() - want).norm() < 1e-13);
    }
    for b in [0.7, 0.45] {
        let bb = c(b, 0.0);
        let got = faddeev_phi_integral(c(0.0, 0.0), bb).unwrap();
        let want = PHI_ZERO_SIGN * (-Complex64::i() * PI * (bb * bb + (bb * bb).inv()) / 24.0).exp();
        assert!((got - want).norm() < 1e-9, "b={b}: {got} vs {want}");
    }
}

#[test]
fn integral_and_product_agree() {
    for b in [Complex64::from_polar(0.8, PI / 8.0), Complex64::from_polar(0.7, 0.05)] {
        let p = DilogParams::new(b).unwrap();
        for z in [c(0.0, 0.0), c(0.3, 0.1), c(-0.5, -0.2), c(1.2, 0.05)] {
            let a = faddeev_phi(z, &p).unwrap();
            let i = faddeev_phi_integral(z, b).unwrap();
            assert!((a - i).norm() < 1e-8, "b={b} z={z}: {a} vs {i}");
        }
    }
    assert!(faddeev_phi_integral(c(0.0, 3.0), c(0.7, 0.0)).is_err());
    assert!(faddeev_phi_integral(c(0.0, 0.0), c(-0.7, 0.0)).is_err());
}

#[test]
fn real_b_shift_relation_from_integral() {
    let b = c(0.7, 0.0);
    let q = (Complex64::i() * PI * b * b).exp();
    let z = c(0.1, -0.2);
    let lhs = faddeev_phi_integral(z + Complex64::i() * b, b).unwrap();
    let rhs = (1.0 + (2.0 * PI * b * z).exp() * q) * faddeev_phi_integral(z, b).unwrap();
    assert!((lhs - rhs).norm() < 1e-8);
}

#[test]
fn fourier_transform_at_three_points() {
    let p = params();
    for w in [c(0.1, -0.3), c(-0.2, -0.25), c(0.3, -0.4)] {
        let r = fourier_transform_check(w, &p).unwrap();
        assert!(r.deviation <= 1e-5, "{r:?}");
        assert!(r.identity_deviation <= 1e-10);
        assert!(r.pass);
    }
    assert!(fourier_transform_check(c(0.1, 0.5), &p).is_err());
}

#[test]
fn fourier_closed_form_respects_inversion() {
    // Φ(−w−c_b) = θ(w+c_b)/Φ(w+c_b) turns one closed form into the other.
    let p = params();
    let w = c(0.37, 0.12);
    let (a, b) = fourier_closed_forms(w, &p).unwrap();
    assert!((a - b).norm() < 1e-12 * b.norm());
    let cb = p.cb();
    let via_theta = theta(w + cb, &p) / faddeev_phi(w + cb, &p).unwrap();
    assert!((via_theta - faddeev_phi(-w - cb, &p).unwrap()).norm() < 1e-12);
}

#[test]
fn classical_limit_decreases() {
    let ts = [0.4, 0.2, 0.1, 0.05];
    let r = classical_limit_check(c(0.5, 0.0), &ts, PI / 180.0).unwrap();
    assert!(r.monotone && r.final_residual <= 1e-2 && r.pass, "{r:?}");
    let r0 = classical_limit_check(c(0.0, 0.0), &ts, PI / 180.0).unwrap();
    assert!(r0.pass);
    assert!((li2(c(-1.0, 0.0)).re + PI * PI / 12.0).abs() < 1e-14);
    let far = classical_limit_check(c(-30.0, 0.0), &[0.2, 0.1], PI / 180.0).unwrap();
    assert!(far.points.iter().all(|p| p.residual < 1e-10));
}

fn rparams(c1: f64, c2: f64) -> RInfiniteParams<f64> {
    RInfiniteParams { c1, c2, dilog: params() }
}

#[test]
fn r_infinite_is_translation_invariant() {
    let p = rparams(0.2, -0.1);
    let x = [0.3, -0.2, 0.1, 0.25];
    let a = r_infinite_element(x, &p).unwrap();
    let b = r_infinite_element(x.map(|v| v + 0.37), &p).unwrap();
    assert!((a - b).norm() < 1e-12 * a.norm());
}

#[test]
fn r_infinite_on_the_antidiagonal() {
    // c' = c'' = 0 and x2' - x1' = x2 - x1: the numerator collapses to θ by inversion
    let p = rparams(0.0, 0.0);
    let d = &p.dilog;
    let cb = d.cb();
    let (x1, x2, y1) = (0.4, -0.1, 0.15);
    let y2 = y1 - (x1 - x2);
    let got = r_infinite_element([x1, x2, y1, y2], &p).unwrap();
    let phase = (2.0 * PI * Complex64::i() * (1.0 - 4.0 * cb * cb) / 12.0).exp();
    let dx = c(x1 - y1, 0.0);
    let want = theta(c(x1 - x2, 0.0), d) / (faddeev_phi(dx + cb, d).unwrap() * faddeev_phi(-dx + cb, d).unwrap()) * phase;
    assert!((got - want).norm() < 1e-12 * want.norm(), "{got} vs {want}");
    // x = x' sits on the zero of Φ at c_b
    assert!(r_infinite_element([x1, x2, x1, x2], &p).is_err());
}

#[test]
fn r_infinite_matches_momentum_integrals() {
    let p = rparams(0.15, -0.05);
    let x = [0.45, -0.1, 0.05, 0.3];
    let closed = r_infinite_element(x, &p).unwrap();
    let quad = r_infinite_quadrature(x, &p).unwrap();
    assert!((closed - quad).norm() <= 1e-4 * closed.norm(), "{closed} vs {quad}");
    assert!(r_infinite_quadrature([0.0, 0.0, 0.1, 0.2], &p).is_err());
}
