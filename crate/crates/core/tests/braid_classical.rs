use std::time::Instant;

use qbraid::braid::{
    apply_r, apply_r_by_mutations, apply_r_inverse, build_braid_matrix, evaluate_braid_word, r_x_window,
    r_y_window, verify_braid_relations, BraidWord, Mode,
};
use qbraid::cluster::Seed;
use qbraid::{ClusterSeed, RatFunc, YSeed};

fn ones(n: usize) -> Vec<RatFunc> {
    vec![RatFunc::one(); n]
}

fn r(s: &str) -> RatFunc {
    RatFunc::parse(s).unwrap()
}

#[test]
fn braid_matrix_n2() {
    let b = build_braid_matrix(2).unwrap();
    assert_eq!(
        b.rows(),
        vec![
            vec![0, 1, -1, 0, 0, 0, 0],
            vec![-1, 0, 0, 1, 0, 0, 0],
            vec![1, 0, 0, -1, 0, 0, 0],
            vec![0, -1, 1, 0, 1, -1, 0],
            vec![0, 0, 0, -1, 0, 0, 1],
            vec![0, 0, 0, 1, 0, 0, -1],
            vec![0, 0, 0, 0, -1, 1, 0],
        ]
    );
    assert!(build_braid_matrix(1).is_err());
}

#[test]
fn braid_matrix_n3_extends_n2() {
    let b2 = build_braid_matrix(2).unwrap();
    let b3 = build_braid_matrix(3).unwrap();
    assert_eq!(b3.size(), 10);
    assert!(b3.is_skew());
    for i in 0..7 {
        for j in 0..7 {
            assert_eq!(b3.at(i, j), b2.at(i, j));
        }
    }
    // the period-3 pattern continues
    for i in 0..7 {
        for j in 0..7 {
            assert_eq!(b3.at(i + 3, j + 3), b2.at(i, j), "{i} {j}");
        }
    }
}

#[test]
fn r_on_ones() {
    let b = build_braid_matrix(2).unwrap();
    let s = ClusterSeed::new(ones(7), b.clone()).unwrap();
    let t = apply_r(&s, 1).unwrap();
    let expect: Vec<RatFunc> = [1, 1, 3, 5, 3, 1, 1].iter().map(|v| RatFunc::from_i64(*v)).collect();
    assert_eq!(t.x, expect);
    let y = YSeed::new(ones(7), b).unwrap();
    let u = apply_r(&y, 1).unwrap();
    let expect: Vec<RatFunc> =
        ["3", "1/5", "5", "1/9", "5", "1/5", "3"].iter().map(|v| r(v)).collect();
    assert_eq!(u.y, expect);
}

#[test]
fn symbolic_window_matches_closed_form() {
    let b = build_braid_matrix(2).unwrap();
    let t = apply_r(&ClusterSeed::initial(b.clone()), 1).unwrap();
    assert_eq!(t.x, r_x_window());
    assert_eq!(t.x[3], r("(x1*x3*x4*x5+x3*x4^2*x5+x1*x3*x5*x7+x3*x4*x5*x7+x1*x2*x6*x7)/(x2*x4*x6)"));
    let u = apply_r(&YSeed::initial(b), 1).unwrap();
    assert_eq!(u.y[3], r("x4/((1+x2+x2*x4)*(1+x6+x4*x6))"));
    assert_eq!(u.y, r_y_window());
}

#[test]
fn window_locality() {
    let b = build_braid_matrix(3).unwrap();
    let s = ClusterSeed::initial(b);
    let t = apply_r(&s, 2).unwrap();
    assert_eq!(&t.x[..3], &s.x[..3]);
    let t1 = apply_r(&s, 1).unwrap();
    assert_eq!(&t1.x[7..], &s.x[7..]);
}

#[test]
fn closed_form_equals_mutation_composition() {
    for n in 2..=4 {
        let b = build_braid_matrix(n).unwrap();
        for i in 1..n {
            let s = ClusterSeed::initial(b.clone());
            let a = apply_r(&s, i).unwrap();
            let m = apply_r_by_mutations(&s, i).unwrap();
            assert_eq!(a, m, "x n={n} i={i}");
            assert_eq!(a.b, b, "matrix invariance n={n} i={i}");
            let y = YSeed::initial(b.clone());
            assert_eq!(apply_r(&y, i).unwrap(), apply_r_by_mutations(&y, i).unwrap(), "y n={n} i={i}");
        }
    }
}

#[test]
fn naturality_of_y_variables() {
    let b = build_braid_matrix(3).unwrap();
    let s = ClusterSeed::initial(b);
    for i in 1..3 {
        assert_eq!(apply_r(&s, i).unwrap().y_seed(), apply_r(&s.y_seed(), i).unwrap());
    }
}

#[test]
fn inverse_letters_cancel() {
    let b = build_braid_matrix(3).unwrap();
    let s = ClusterSeed::initial(b.clone());
    let w = BraidWord::parse(3, "s1 s1^-1").unwrap();
    assert_eq!(evaluate_braid_word(&w, &s).unwrap(), s);
    let w = BraidWord::parse(3, "s2^-1 s2").unwrap();
    let y = YSeed::initial(b);
    assert_eq!(evaluate_braid_word(&w, &y).unwrap(), y);
    assert_eq!(apply_r(&apply_r_inverse(&y, 1).unwrap(), 1).unwrap(), y);
    assert_eq!(evaluate_braid_word(&BraidWord::parse(3, "").unwrap(), &y).unwrap(), y);
}

#[test]
fn word_parsing() {
    let w = BraidWord::parse(4, "s1 s3^-1  s2").unwrap();
    assert_eq!(w.to_string(), "s1 s3^-1 s2");
    assert!(BraidWord::parse(3, "s3").is_err());
    assert!(BraidWord::parse(3, "t1").is_err());
    assert!(BraidWord::parse(3, "s1^2").is_err());
}

#[test]
fn braid_relations_n3_and_far_commutation_n4() {
    for mode in [Mode::Y, Mode::X] {
        let t = Instant::now();
        let rep = verify_braid_relations(3, mode).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!(t.elapsed().as_secs() < 60);
    }
    let rep = verify_braid_relations(4, Mode::Y).unwrap();
    assert_eq!(rep.results.len(), 3);
    assert!(rep.pass());
}

#[test]
fn wrong_matrix_is_rejected() {
    let s = ClusterSeed::initial(qbraid::ExchangeMatrix::zero(7));
    assert!(apply_r(&s, 1).is_err());
    let s = ClusterSeed::initial(build_braid_matrix(2).unwrap());
    assert!(apply_r(&s, 2).is_err());
    assert!(s.permute(1, 8).is_err());
}
