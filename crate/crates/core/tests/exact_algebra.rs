use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use proptest::prelude::*;
use qbraid::exact::cyclotomic::euler_phi;
use qbraid::{Cyclotomic, Error, Poly, RatFunc};

fn r(s: &str) -> RatFunc {
    RatFunc::parse(s).unwrap()
}

#[test]
fn inverse_pair_is_one() {
    assert!(r("x1/x2").mul(&r("x2/x1")).is_one());
}

#[test]
fn additive_identity() {
    let a = r("(1+x2)/x1");
    assert_eq!(a.add(&RatFunc::zero()), a);
}

#[test]
fn difference_of_squares_over_four() {
    let e = r("(x1+x2)^2 - (x1-x2)^2").div(&RatFunc::from_i64(4)).unwrap();
    assert_eq!(e, r("x1*x2"));
}

#[test]
fn division_by_zero_is_an_error() {
    assert_eq!(r("x1").div(&RatFunc::zero()), Err(Error::DivisionByZero));
    assert_eq!(RatFunc::zero().inv(), Err(Error::DivisionByZero));
}

#[test]
fn canonical_form_cancels_common_factors() {
    let a = r("(x1^2 - x2^2)/(2*x1 + 2*x2)");
    assert_eq!(a, r("x1/2 - x2/2"));
    assert_eq!(a.to_string(), "(x1 - x2)/2");
    let b = r("(x1*x3 + x2*x3)/(-x3^2)");
    assert_eq!(b.to_string(), "(-x1 - x2)/x3");
}

#[test]
fn print_parse_round_trip_examples() {
    for s in [
        "x1",
        "0",
        "-3",
        "(1 + x2)/x1",
        "(x1*x3*x5 + x3*x4*x5 + x1*x2*x6)/(x2*x4)",
        "x4/((1+x2+x2*x4)*(1+x6+x4*x6))",
        "1/(x1^2*x2)",
        "-x1^3/7",
    ] {
        let a = r(s);
        let printed = a.to_string();
        assert_eq!(r(&printed), a, "{s} -> {printed}");
        assert_eq!(r(&printed).to_string(), printed);
    }
}

#[test]
fn y_prefix_printing() {
    let a = r("y1/(1+y2)");
    assert_eq!(a.to_string_with('y'), "y1/(y2 + 1)");
}

#[test]
fn parse_errors() {
    assert!(RatFunc::parse("x1 +").is_err());
    assert!(RatFunc::parse("x0").is_err());
    assert!(RatFunc::parse("x1 + y2").is_err());
    assert!(RatFunc::parse("1/(x1-x1)").is_err());
}

#[test]
fn gcd_heavy_cancellation() {
    // common factor of moderate size on both sides
    let f = r("x1*x2 + x3^2 - 5*x4 + 2");
    let g = r("x1 + x2*x3*x4 + 1");
    let h = r("x2^3 - x1*x4 + x3");
    let a = f.mul(&g).div(&f.mul(&h)).unwrap();
    assert_eq!(a, g.div(&h).unwrap());
    assert_eq!(a.num().len(), 3);
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 0..4), -4i64..5), 1..5)
        .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
    (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| RatFunc::new(n, d).ok())
}

fn point() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-7i64..8, 1i64..6), 4)
        .prop_map(|v| v.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn quotient_times_divisor(a in small_ratfunc(), b in small_ratfunc()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.div(&b).unwrap().mul(&b), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in small_ratfunc(), b in small_ratfunc(), p in point()) {
        let (Some(va), Some(vb)) = (a.eval_rational(&p), b.eval_rational(&p)) else { return Ok(()) };
        prop_assert_eq!(a.add(&b).eval_rational(&p).unwrap(), &va + &vb);
        prop_assert_eq!(a.mul(&b).eval_rational(&p).unwrap(), &va * &vb);
        prop_assert_eq!(a.neg().eval_rational(&p).unwrap(), -va.clone());
        if !vb.is_zero_value() {
            if let Some(q) = a.div(&b).unwrap().eval_rational(&p) {
                prop_assert_eq!(q, &va / &vb);
            }
            if let Some(q) = b.inv().unwrap().eval_rational(&p) {
                prop_assert_eq!(q, vb.recip());
            }
        }
    }

    #[test]
    fn printing_round_trips(a in small_ratfunc()) {
        let s = a.to_string();
        prop_assert_eq!(RatFunc::parse(&s).unwrap(), a);
    }

    #[test]
    fn field_axioms(a in small_ratfunc(), b in small_ratfunc(), c in small_ratfunc()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }
}

trait IsZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl IsZeroValue for BigRational {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

#[test]
fn cyclotomic_examples() {
    let z4 = Cyclotomic::zeta_pow(4, 1);
    assert_eq!(z4.clone() * z4, Cyclotomic::integer(-1));
    let z3 = Cyclotomic::zeta_pow(3, 1);
    let s = Cyclotomic::integer(1) + z3.clone() + z3.clone() * z3;
    assert!(s.is_zero());
    let z5 = Cyclotomic::zeta_pow(5, 1);
    let a = Cyclotomic::integer(1) - z5;
    assert_eq!(a.clone() * a.inverse().unwrap(), Cyclotomic::integer(1));
    assert_eq!(Cyclotomic::integer(0).inverse(), Err(Error::DivisionByZero));
}

#[test]
fn zeta_to_the_m_is_one() {
    for m in 1..=24u32 {
        let z = Cyclotomic::zeta_pow(m, 1);
        let mut acc = Cyclotomic::integer(1);
        for _ in 0..m {
            acc = acc * z.clone();
        }
        assert_eq!(acc, Cyclotomic::integer(1), "m={m}");
        assert_eq!(z.coeffs().len() as u32, euler_phi(m));
    }
}

#[test]
fn mixed_moduli_embed_into_lcm() {
    // ζ_4 · ζ_6 = ζ_12^5
    let p = Cyclotomic::zeta_pow(4, 1) * Cyclotomic::zeta_pow(6, 1);
    assert_eq!(p, Cyclotomic::zeta_pow(12, 5));
    assert_eq!(Cyclotomic::zeta_pow(6, 2), Cyclotomic::zeta_pow(3, 1));
    assert_eq!(Cyclotomic::zeta_pow(8, 3).conjugate(), Cyclotomic::zeta_pow(8, 5));
}

fn cyclo(m: u32, coeffs: &[i64]) -> Cyclotomic {
    Cyclotomic::from_int_coeffs(m, coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complex_embedding_is_a_homomorphism(
        m in 1u32..=24,
        a in prop::collection::vec(-1000i64..=1000, 1..24),
        b in prop::collection::vec(-1000i64..=1000, 1..24),
    ) {
        let x = cyclo(m, &a);
        let y = cyclo(m, &b);
        let (ex, ey) = (x.to_complex(), y.to_complex());
        let scale = 1.0 + ex.norm() * ey.norm();
        prop_assert!(((x.clone() * y.clone()).to_complex() - ex * ey).norm() <= 1e-10 * scale);
        prop_assert!(((x.clone() + y.clone()).to_complex() - (ex + ey)).norm() <= 1e-10 * scale);
        if !x.is_zero() {
            let inv = x.inverse().unwrap();
            prop_assert_eq!(inv.clone() * x.clone(), Cyclotomic::integer(1));
            let ei = inv.to_complex();
            prop_assert!((ei * ex - Complex::new(1.0, 0.0)).norm() <= 1e-8);
        }
    }
}

#[test]
fn embedding_matches_coefficient_evaluation() {
    let x = cyclo(7, &[1000, -999, 3, 0, 17, 250]);
    let direct: Complex<f64> = [1000.0, -999.0, 3.0, 0.0, 17.0, 250.0]
        .iter()
        .enumerate()
        .map(|(k, c)| Complex::from_polar(*c, std::f64::consts::TAU * k as f64 / 7.0))
        .sum();
    assert!((x.to_complex() - direct).norm() <= 1e-12 * direct.norm());
}
