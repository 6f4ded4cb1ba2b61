//! Multivariate polynomial GCD over ℤ.
//!
//! Monomial and integer contents are split off first. A cheap modular image
//! certifies the common coprime case; otherwise the modular algorithm runs.
//! A primitive pseudo-remainder sequence is kept as a test oracle.

use num_integer::Integer;

use super::poly::{mono_min, Poly};

/// Greatest common divisor, normalised to a positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.leading_sign_positive();
    }
    if b.is_zero() {
        return a.leading_sign_positive();
    }
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Poly::constant(c);
    }
    let ma = a.mono_content();
    let mb = b.mono_content();
    let m = mono_min(&ma, &mb);
    let pa = a.div_mono(&ma).unwrap().div_int(&ca).unwrap().leading_sign_positive();
    let pb = b.div_mono(&mb).unwrap().div_int(&cb).unwrap().leading_sign_positive();
    let core = primitive_gcd(&pa, &pb);
    core.mul_term(&m, &c)
}

/// GCD of two primitive polynomials with positive leading coefficients and
/// no monomial content.
fn primitive_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_one() || b.is_one() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    if a.is_monomial() || b.is_monomial() {
        // a monomial without monomial content is a constant
        return Poly::one();
    }
    if let Some(v) = absent_variable(a, b) {
        // gcd must be free of v: fold over the v-coefficients of the side that has it
        let (has, other) = if a.degree_in(v) > 0 { (a, b) } else { (b, a) };
        let mut g = other.clone();
        for c in has.coeffs_in(v) {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = gcd(&g, &c);
            }
        }
        return g.primitive();
    }
    let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.clone();
    }
    if super::modular::certify_coprime(a, b) {
        return Poly::one();
    }
    super::modular::modular_gcd(a, b)
}

/// A variable that occurs in exactly one of the two polynomials.
fn absent_variable(a: &Poly, b: &Poly) -> Option<usize> {
    let n = a.nvars().max(b.nvars());
    (0..n).find(|&v| (a.degree_in(v) > 0) != (b.degree_in(v) > 0))
}

#[cfg(test)]
fn main_variable(a: &Poly, b: &Poly) -> usize {
    let n = a.nvars().max(b.nvars());
    (0..n).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0).expect("nonconstant input")
}

#[cfg(test)]
fn content_in(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        if !c.is_zero() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

#[cfg(test)]
fn deg(coeffs: &[Poly]) -> usize {
    coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Pseudo-remainder of univariate polynomials over ℤ[other variables].
#[cfg(test)]
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = deg(b);
    let lb = b[db].clone();
    let mut r: Vec<Poly> = a.to_vec();
    while !r.iter().all(|c| c.is_zero()) && deg(&r) >= db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (k, bc) in b[..=db].iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&lr));
        }
        r.truncate(dr);
        if r.is_empty() {
            r.push(Poly::zero());
        }
    }
    r
}

#[cfg(test)]
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let v = main_variable(a, b);
    let ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let ca = content_in(&ac);
    let cb = content_in(&bc);
    let c = gcd(&ca, &cb);
    let mut p: Vec<Poly> = ac.iter().map(|x| x.div_exact(&ca).unwrap()).collect();
    let mut q: Vec<Poly> = bc.iter().map(|x| x.div_exact(&cb).unwrap()).collect();
    if deg(&p) < deg(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if deg(&q) == 0 {
            if q[0].is_zero() {
                break;
            }
            return c;
        }
        let r = prem(&p, &q);
        if r.iter().all(|x| x.is_zero()) {
            break;
        }
        let rc = content_in(&r);
        p = q;
        q = r.iter().map(|x| x.div_exact(&rc).unwrap()).collect();
    }
    let g = Poly::from_coeffs_in(v, &q[..=deg(&q)]);
    g.primitive().mul(&c).leading_sign_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn gcd_of_products() {
        let f = x(0).add(&x(1)).add(&Poly::one());
        let g = x(0).mul(&x(2)).sub(&Poly::from_i64(3));
        let h = x(1).pow(2).add(&x(2));
        let a = f.mul(&g).scale(&6.into());
        let b = f.mul(&h).scale(&4.into());
        assert_eq!(gcd(&a, &b), f.scale(&2.into()));
    }

    #[test]
    fn prs_matches_modular() {
        let f = x(0).mul(&x(1)).add(&Poly::from_i64(2));
        let a = f.mul(&x(0).add(&Poly::one()));
        let b = f.mul(&x(1).sub(&Poly::one()));
        assert_eq!(prs_gcd(&a, &b), f);
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn coprime_inputs() {
        let a = x(0).add(&x(1));
        let b = x(0).sub(&x(1));
        assert!(gcd(&a, &b).is_one());
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = Poly> {
        use proptest::prelude::*;
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -3i64..=3), 1..5)
            .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(m, c)| (m, c.into()))))
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(200))]
        #[test]
        fn modular_agrees_with_prs(f in small_poly(), g in small_poly(), h in small_poly()) {
            let a = f.mul(&g);
            let b = f.mul(&h);
            proptest::prop_assume!(!a.is_zero() && !b.is_zero());
            let expect = if a.is_constant() || b.is_constant() {
                gcd(&a, &b)
            } else {
                let ma = a.mono_content();
                let mb = b.mono_content();
                let pa = a.div_mono(&ma).unwrap().primitive();
                let pb = b.div_mono(&mb).unwrap().primitive();
                if pa.is_constant() || pb.is_constant() || pa.is_monomial() || pb.is_monomial() {
                    gcd(&a, &b)
                } else {
                    prs_gcd(&pa, &pb)
                        .mul_term(&mono_min(&ma, &mb), &a.content().gcd(&b.content()))
                        .leading_sign_positive()
                }
            };
            proptest::prop_assert_eq!(gcd(&a, &b), expect);
        }
    }
}
