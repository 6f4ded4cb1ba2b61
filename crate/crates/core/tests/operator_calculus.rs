use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use qbraid::opcalc::*;
use qbraid::qtorus::FactorChain;
use qbraid::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx2() -> Context {
    Context::braid(2, true).unwrap()
}

fn word(ctx: &Context, s: &str) -> OperatorWord {
    parse_word(ctx, s).unwrap()
}

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

#[test]
fn commutator_table() {
    let c = ctx2();
    let f = |s: &str| c.parse(s).unwrap();
    assert_eq!(c.commutator(&f("y2"), &f("y4")).unwrap(), r(-1));
    assert_eq!(c.commutator(&f("y4+2*y5"), &f("y4+2*y5")).unwrap(), r(0));
    assert_eq!(c.commutator(&f("y1+c"), &f("y2")).unwrap(), c.commutator(&f("y1"), &f("y2")).unwrap());
    assert_eq!(c.commutator(&f("y2"), &f("y1")).unwrap(), r(1));
}

#[test]
fn linear_forms_parse_and_print() {
    let f = LinearForm::parse(7, "y4 + y5 - c + 1/2*cb - 3").unwrap();
    assert_eq!(f.to_string(), "y4+y5-c+1/2*cb-3");
    assert_eq!(LinearForm::parse(7, &f.to_string()).unwrap(), f);
    assert!(LinearForm::parse(7, "y8").is_err());
    assert!(LinearForm::parse(7, "z1").is_err());
    assert_eq!(LinearForm::zero(3).to_string(), "0");
}

fn form(m: usize) -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-3i64..=3, m + 1).prop_map(move |v| {
        let mut f = LinearForm::from_exponents(&v[..m]);
        f.c = Rational64::from_integer(v[m]);
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commutator_is_bilinear_and_antisymmetric(a in form(7), b in form(7), d in form(7), t in -3i64..=3) {
        let c = ctx2();
        let ab = c.commutator(&a, &b).unwrap();
        prop_assert_eq!(ab, -c.commutator(&b, &a).unwrap());
        let lhs = c.commutator(&a.add(&d.scale(r(t))), &b).unwrap();
        prop_assert_eq!(lhs, ab + r(t) * c.commutator(&d, &b).unwrap());
    }

    #[test]
    fn pentagon_needs_unit_commutator(a in form(7), b in form(7)) {
        let c = ctx2();
        let w = OperatorWord::new(vec![Token::phi(a.clone()), Token::phi(b.clone())]);
        let v = c.commutator(&a, &b).unwrap();
        match apply_pentagon(&c, &w, 0, Direction::Forward, Some(0)) {
            Ok((_, step)) => {
                prop_assert!(v == r(1) || v == r(-1));
                prop_assert_eq!(step.evidence[0].commutator.as_str(), "1");
            }
            Err(e) => {
                prop_assert!(v != r(1) && v != r(-1));
                prop_assert!(matches!(e, Error::Inapplicable(_)));
            }
        }
    }
}

#[test]
fn shift_examples() {
    let c = ctx2();
    let (w, _) = apply_shift(&c, &word(&c, "E(y1) Phi(y1)"), 0, Direction::Backward).unwrap();
    assert_eq!(w.to_string(), "Phi(y1) E(y1)");
    let (w, step) = apply_shift(&c, &word(&c, "E(y2) Phi(y1)"), 0, Direction::Backward).unwrap();
    assert_eq!(w.to_string(), "Phi(y1) (1 + q*E(y1)) E(y2)");
    assert_eq!(step.evidence[0].commutator, "1");
    let (w, _) = apply_shift(&c, &word(&c, "E(2*y2) Phi(y1)"), 0, Direction::Backward).unwrap();
    assert_eq!(w.to_string(), "Phi(y1) (1 + q*E(y1)) (1 + q^3*E(y1)) E(2*y2)");
    let (w, _) = apply_shift(&c, &word(&c, "Phi(y1) E(y2)"), 0, Direction::Forward).unwrap();
    assert_eq!(w.to_string(), "E(y2) (1 + q^-1*E(y1))^-1 Phi(y1)");
    let err = apply_shift(&c, &word(&c, "E(1/2*y2) Phi(y1)"), 0, Direction::Backward).unwrap_err();
    assert!(matches!(err, Error::Inapplicable(m) if m.contains("non-integer")));
    assert!(apply_shift(&c, &word(&c, "Phi(y1) Phi(y2)"), 0, Direction::Forward).is_err());
}

#[test]
fn shifted_words_agree_in_a_representation() {
    let c = ctx2();
    for s in ["y2", "2*y2", "-y2", "y2+y4", "-2*y2+y5"] {
        let x = Token::Exp(c.parse(s).unwrap());
        let d = conjugate(&c, &word(&c, "Phi(y1)"), x.clone(), 1).unwrap();
        audit(&c, &d).unwrap();
        let lhs = d.result.to_chain().unwrap();
        // Ad Φ(ŷ_1) on a monomial agrees with μ♯_1, i.e. the closed product formula.
        let mono = OperatorWord::new(vec![x]).to_chain().unwrap();
        let gamma: i64 = c.commutator(&c.parse(s).unwrap(), &c.y(1)).unwrap().to_integer();
        let mut expect = FactorChain::one(7);
        let y1 = FactorChain::generator(7, 1);
        for m in 1..=gamma.abs() {
            let (q, inv) = if gamma > 0 { (2 * m - 1, true) } else { (1 - 2 * m, false) };
            expect = expect.mul(&FactorChain::binom(q, y1.clone(), inv));
        }
        let expect = expect.mul(&mono);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = constrained_representation::<Complex64, _>(&c, 5, &mut rng).unwrap();
        let dev = lhs.eval(&rep).unwrap().rel_dist(&expect.eval(&rep).unwrap());
        assert!(dev < 1e-10, "{s}: {dev}");
    }
}

#[test]
fn pentagon_examples() {
    let c = ctx2();
    let w = word(&c, "Phi(y2) Phi(y1)");
    let (out, step) = apply_pentagon(&c, &w, 0, Direction::Forward, None).unwrap();
    assert_eq!(out.to_string(), "Phi(y1) Phi(y1+y2) Phi(y2)");
    assert_eq!(step.evidence[0].commutator, "1");
    let (back, _) = apply_pentagon(&c, &out, 0, Direction::Backward, None).unwrap();
    assert_eq!(back, w);
    let commuting = word(&c, "Phi(y1) Phi(y5)");
    let err = apply_pentagon(&c, &commuting, 0, Direction::Forward, None).unwrap_err();
    assert!(matches!(err, Error::Inapplicable(m) if m.contains("0")));
    // inverse form: Φ(P)^{-1}Φ(X) = Φ(X+P)Φ(X)Φ(P)^{-1}
    let (out, _) = apply_pentagon(&c, &word(&c, "Phi(y1)^-1 Phi(y2)"), 0, Direction::Forward, None).unwrap();
    assert_eq!(out.to_string(), "Phi(y1+y2) Phi(y2) Phi(y1)^-1");
}

#[test]
fn theta_examples() {
    let c = ctx2();
    // [x, p] = i/2π with x = ŷ2, p = ŷ1
    let (w, _) = apply_theta(&c, &word(&c, "theta(y1) E(y2)"), 0, Direction::Forward).unwrap();
    assert_eq!(w.to_string(), "E(-y1+y2) theta(y1)");
    let (w, _) = apply_theta(&c, &word(&c, "theta(y2) E(y1)"), 0, Direction::Forward).unwrap();
    assert_eq!(w.to_string(), "E(y1+y2) theta(y2)");
    let (w, _) = apply_theta(&c, &word(&c, "E(y1+y2) theta(y2)"), 0, Direction::Backward).unwrap();
    assert_eq!(w.to_string(), "theta(y2) E(y1)");
    let (w, _) = apply_fuse(&c, &word(&c, "Phi(y4) Phi(-y4)"), 0).unwrap();
    assert_eq!(w.to_string(), "theta(y4)");
    let (w, _) = apply_split(&w, 0).unwrap();
    assert_eq!(w.to_string(), "Phi(y4) Phi(-y4)");
    assert!(apply_fuse(&c, &word(&c, "Phi(y4) Phi(y4)"), 0).is_err());
    let err = apply_theta(&c, &word(&c, "theta(y1) E(1/2*y2)"), 0, Direction::Forward).unwrap_err();
    assert!(matches!(err, Error::Inapplicable(_)));
}

#[test]
fn center_substitution() {
    let c = ctx2();
    let sub = |s: &str| {
        let (w, _) = substitute_center(&c, &word(&c, s), 0, 1).unwrap();
        w.to_chain().unwrap().to_string()
    };
    assert_eq!(sub("E(c)"), "Y5*Y6");
    assert_eq!(sub("E(-c)"), "Y2^-1*Y3^-1");
    assert_eq!(sub("E(0)"), "1");
    let free = Context::braid(2, false).unwrap();
    assert!(substitute_center(&free, &word(&free, "E(c)"), 0, 1).is_err());
    let ctx3 = Context::braid(3, true).unwrap();
    let (w, _) = substitute_center(&ctx3, &word(&ctx3, "E(c+y1)"), 0, 2).unwrap();
    assert_eq!(w.to_string(), "E(y1+y8+y9)");
}

#[test]
fn rewrites_preserve_the_word_modulo_constraint() {
    let c = ctx2();
    assert!(word(&c, "Phi(y3)").equiv(&word(&c, "Phi(c-y2)"), &c));
    assert!(!word(&c, "Phi(y3)").equiv(&word(&c, "Phi(c-y5)"), &c));
    assert!(word(&c, "theta(y4+c)").equiv(&word(&c, "theta(-y4-c)"), &c));
    let (w, _) = apply_cancel(&c, &word(&c, "Phi(y3) Phi(c-y2)^-1"), 0).unwrap();
    assert!(w.is_empty());
    let (w, _) = apply_insert(&OperatorWord::new(vec![]), 0, &Token::phi(c.y(4))).unwrap();
    assert_eq!(w.to_string(), "Phi(y4) Phi(y4)^-1");
    let (w, step) = apply_merge(&c, &word(&c, "E(y2) E(y1)"), 0).unwrap();
    assert_eq!(w.to_string(), "q * E(y1+y2)");
    assert_eq!(step.evidence[0].commutator, "1");
    let (w, _) = apply_scalar(&c, &word(&c, "theta(y2+y3)"), 0).unwrap();
    assert_eq!(w.prefactor.thetas.len(), 1);
    assert_eq!(w.inverse().prefactor.thetas[0].1, true);
}

#[test]
fn r_word_shape() {
    let c = Context::braid(3, true).unwrap();
    assert_eq!(r_word(&c, 2).unwrap().to_string(), "Phi(y7) Phi(y5) Phi(y9) Phi(y7)^-1 theta(y7+c)");
    assert!(r_word(&c, 3).is_err());
    assert!(r_word(&Context::new(qbraid::ExchangeMatrix::zero(3)), 1).is_err());
}

#[test]
fn adjoint_matches_closed_form() {
    for i in [1, 2] {
        let rep = verify_adjoint(i, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        for case in &rep.cases {
            assert!(case.pass, "window {i}, Y{}: {:?}", case.generator, case);
            assert_eq!(case.checks.len(), 3);
        }
        assert!(rep.pass);
    }
}

#[test]
fn adjoint_of_y3_is_the_binomial_chain() {
    let c = ctx2();
    let (got, d) = adjoint_of_generator(&c, 1, 3).unwrap();
    audit(&c, &d).unwrap();
    let g = |k| FactorChain::generator(7, k);
    let y2p = g(2).mul(&FactorChain::binom(1, g(4), false));
    let y6p = g(6).mul(&FactorChain::binom(1, g(4), false));
    let y4pp = FactorChain::generator_pow(7, 4, -1)
        .mul(&FactorChain::binom(1, y2p.clone(), false))
        .mul(&FactorChain::binom(1, y6p, false));
    let expect = y2p.inverse().mul(&FactorChain::binom(1, y4pp, false));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for order in [3, 5] {
        let rep = constrained_representation::<Complex64, _>(&c, order, &mut rng).unwrap();
        let dev = got.eval(&rep).unwrap().rel_dist(&expect.eval(&rep).unwrap());
        assert!(dev < 1e-10, "N={order}: {dev}");
    }
}

#[test]
fn extra_q_in_center_substitution_breaks_adjoint() {
    // e^{2πbc} = q·Y5Y6 instead of Y5Y6 spoils the Y2 case.
    let c = ctx2();
    let (got, _) = adjoint_of_generator(&c, 1, 2).unwrap();
    let with_q = FactorChain::monomial(1, vec![0; 7]).mul(&got);
    let expected = &qbraid::qtorus::apply_rq(c.matrix(), 1).unwrap()[1];
    let rep = constrained_representation::<Complex64, _>(&c, 5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let e = expected.eval(&rep).unwrap();
    assert!(got.eval(&rep).unwrap().rel_dist(&e) < 1e-10);
    assert!(with_q.eval(&rep).unwrap().rel_dist(&e) > 0.1);
}

#[test]
fn braid_proof_replays() {
    let rep = replay_braid_proof().unwrap();
    assert!(rep.pass, "{:?}", rep.failure);
    assert_eq!(rep.residual, None);
    assert!(rep.checkpoints >= 10);
    let has = |rule: &str, l: &str, m: &str, v: &str| {
        rep.steps.iter().any(|s| {
            s.rule == rule
                && s.evidence.iter().any(|e| {
                    ((e.left == l && e.right == m) || (e.left == m && e.right == l && v == "0")) && e.commutator == v
                })
        })
    };
    assert!(has("commute", "y9", "y4", "0"));
    assert!(has("pentagon", "y5", "y4", "1"));
}

#[test]
fn tampered_proof_fails_with_step_index() {
    let bad = BRAID_N3_SCRIPT.replacen("pentagon 10 fwd", "pentagon 9 fwd", 1);
    let rep = replay(&bad).unwrap();
    assert!(!rep.pass);
    let f = rep.failure.unwrap();
    assert!(f.starts_with("step 8"), "{f}");
    let truncated: String = BRAID_N3_SCRIPT.lines().take(40).collect::<Vec<_>>().join("\n");
    let rep = replay(&truncated).unwrap();
    assert!(!rep.pass && rep.failure.unwrap().contains("differs"));
}

#[test]
fn far_commutation_by_script() {
    // R1 R3 = R3 R1 on four strands: every token of R3 commutes past R1.
    let mut s = String::from("strands 4\nlhs R1 R3\nrhs R3 R1\n");
    for k in 0..5 {
        for p in (k..k + 5).rev() {
            s.push_str(&format!("commute {p}\n"));
        }
    }
    let rep = replay(&s).unwrap();
    assert!(rep.pass, "{:?}", rep.failure);
    assert_eq!(rep.steps.len(), 25);
}

#[test]
fn script_errors() {
    assert!(parse_script("lhs R1\n").is_err());
    assert!(parse_script("strands 3\nlhs R1\nrhs R1\nfrobnicate 1\n").is_err());
    assert!(parse_script("strands 3\nlhs R1\nrhs R1\npentagon 1 sideways\n").is_err());
    assert!(parse_script("strands 3\nlhs R1\nrhs R1\ncommute 1 2\n").is_err());
    let rep = replay("strands 3\nlhs R1\nrhs R1\n").unwrap();
    assert!(rep.pass && rep.steps.is_empty());
}
