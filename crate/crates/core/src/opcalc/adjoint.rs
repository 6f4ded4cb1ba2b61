use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Cyclotomic;
use crate::qtorus::rq::{deviation, within, MAX_RETRIES};
use crate::qtorus::{apply_rq, FactorChain, RepField, Representation};

use super::form::{Context, LinearForm};
use super::word::{apply_cancel, apply_shift, apply_theta, substitute_center, Direction, OperatorWord, Step, Token};

/// The word Φ(ŷ_{3i+1})Φ(ŷ_{3i−1})Φ(ŷ_{3i+3})Φ(ŷ_{3i+1})^{-1}θ(c+ŷ_{3i+1}).
pub fn r_word(ctx: &Context, i: usize) -> Result<OperatorWord> {
    let n = ctx.strands().ok_or_else(|| Error::InvalidInput("context is not a braid torus".into()))?;
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n - 1 });
    }
    let y = |k: usize| ctx.y(k);
    let a = y(3 * i + 1);
    Ok(OperatorWord::new(vec![
        Token::phi(a.clone()),
        Token::phi(y(3 * i - 1)),
        Token::phi(y(3 * i + 3)),
        Token::phi_inv(a.clone()),
        Token::theta(LinearForm::c(ctx.size()).add(&a)),
    ]))
}

/// A sequence of checked rewrites.
#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    pub initial: OperatorWord,
    pub steps: Vec<Step>,
    pub result: OperatorWord,
}

fn push(w: &mut OperatorWord, steps: &mut Vec<Step>, r: (OperatorWord, Step)) {
    *w = r.0;
    steps.push(r.1);
}

/// Normal-orders W·X·W^{-1} for a torus token X by moving the innermost
/// operator of W through the torus part and cancelling it against its
/// inverse, then substitutes the centre for window i.
pub fn conjugate(ctx: &Context, outer: &OperatorWord, x: Token, window_i: usize) -> Result<Derivation> {
    let mut w = outer.concat(&OperatorWord::new(vec![x])).concat(&outer.inverse());
    let initial = w.clone();
    let mut steps = Vec::new();
    loop {
        let Some(s) = w.tokens.iter().position(Token::is_torus) else {
            return Err(Error::Inapplicable(format!("stuck: no torus part in {w}")));
        };
        let e = (s..w.len()).find(|&k| !w.tokens[k].is_torus()).unwrap_or(w.len());
        if s == 0 && e == w.len() {
            break;
        }
        if s == 0 || e == w.len() || !w.tokens[s - 1].inverse().equiv(&w.tokens[e], ctx) {
            return Err(Error::Inapplicable(format!("stuck: {w}")));
        }
        let mut p = s - 1;
        while w.tokens[p + 1].is_torus() {
            let before = w.len();
            let r = match w.tokens[p] {
                Token::Phi { .. } => apply_shift(ctx, &w, p, Direction::Forward),
                Token::Theta { .. } => apply_theta(ctx, &w, p, Direction::Forward),
                _ => Err(Error::Inapplicable(format!("stuck: {w}"))),
            }
            .map_err(|err| Error::Inapplicable(format!("{err}; word {w}")))?;
            push(&mut w, &mut steps, r);
            p += w.len() - before + 1;
        }
        let r = apply_cancel(ctx, &w, p)?;
        push(&mut w, &mut steps, r);
    }
    for p in 0..w.len() {
        if w.tokens[p].forms().iter().any(|f| !f.c.is_zero()) {
            let r = substitute_center(ctx, &w, p, window_i)?;
            push(&mut w, &mut steps, r);
        }
    }
    Ok(Derivation { initial, steps, result: w })
}

/// Ad(R^i) of generator Y_j as a factor chain.
pub fn adjoint_of_generator(ctx: &Context, i: usize, j: usize) -> Result<(FactorChain, Derivation)> {
    let r = r_word(ctx, i)?;
    let d = conjugate(ctx, &r, Token::Exp(ctx.y(j)), i)?;
    let chain = d.result.to_chain()?.simplify(ctx.matrix());
    Ok((chain, d))
}

/// A representation with κ_{3k} = κ_2κ_3/κ_{3k−1}, so that all central
/// Y_{3k−1}Y_{3k} coincide (the constraint ŷ_{3k−1} + ŷ_{3k} = c).
pub fn constrained_representation<T: RepField, R: Rng>(ctx: &Context, order: u32, rng: &mut R) -> Result<Representation<T>> {
    let n = ctx.strands().ok_or_else(|| Error::InvalidInput("context is not a braid torus".into()))?;
    let mut kappa: Vec<T> = (0..ctx.size()).map(|_| T::sample_kappa(rng)).collect();
    let c = kappa[1].clone() * kappa[2].clone();
    for k in 2..=n {
        let inv = kappa[3 * k - 2].try_inv().ok_or(Error::DivisionByZero)?;
        kappa[3 * k - 1] = c.clone() * inv;
    }
    Representation::build(ctx.matrix(), order, kappa)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepDeviation {
    pub label: String,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointCase {
    pub generator: usize,
    pub steps: usize,
    pub result: String,
    pub expected: String,
    pub checks: Vec<RepDeviation>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointReport {
    pub window: usize,
    pub strands: usize,
    pub cases: Vec<AdjointCase>,
    pub pass: bool,
}

const TOL: f64 = 1e-9;

fn compare_in<T: RepField, R: Rng>(
    ctx: &Context,
    order: u32,
    label: &str,
    a: &FactorChain,
    b: &FactorChain,
    rng: &mut R,
) -> Result<RepDeviation> {
    let mut last = String::new();
    for _ in 0..=MAX_RETRIES {
        let rep = constrained_representation::<T, R>(ctx, order, rng)?;
        match (a.eval(&rep), b.eval(&rep)) {
            (Ok(x), Ok(y)) => {
                let d = deviation(&x, &y);
                return Ok(RepDeviation { label: label.into(), deviation: d, pass: within::<T>(d, TOL) });
            }
            (Err(Error::Singular(m)), _) | (_, Err(Error::Singular(m))) => last = m,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Err(Error::Singular(format!("singular after {MAX_RETRIES} retries: {last}")))
}

/// Checks R^i·Y_j·(R^i)^{-1} against the R^q closed form for the seven
/// window generators, in constrained representations (complex N = 3, 5 and
/// exact cyclotomic N = 3).
pub fn verify_adjoint<R: Rng>(i: usize, rng: &mut R) -> Result<AdjointReport> {
    let n = (i + 1).max(2);
    let ctx = Context::braid(n, true)?;
    let expected = apply_rq(ctx.matrix(), i)?;
    let mut cases = Vec::new();
    for j in 3 * i - 2..=3 * i + 4 {
        let exp = &expected[j - 1];
        let mut case = AdjointCase {
            generator: j,
            steps: 0,
            result: String::new(),
            expected: exp.to_string(),
            checks: Vec::new(),
            error: None,
            pass: false,
        };
        match adjoint_of_generator(&ctx, i, j) {
            Ok((chain, d)) => {
                case.steps = d.steps.len();
                case.result = chain.to_string();
                let checks = [
                    compare_in::<Complex64, R>(&ctx, 3, "complex N=3", &chain, exp, rng),
                    compare_in::<Complex64, R>(&ctx, 5, "complex N=5", &chain, exp, rng),
                    compare_in::<Cyclotomic, R>(&ctx, 3, "cyclotomic N=3", &chain, exp, rng),
                ];
                for c in checks {
                    match c {
                        Ok(c) => case.checks.push(c),
                        Err(e) => case.error = Some(e.to_string()),
                    }
                }
                case.pass = case.error.is_none() && case.checks.iter().all(|c| c.pass);
            }
            Err(e) => case.error = Some(e.to_string()),
        }
        cases.push(case);
    }
    let pass = cases.iter().all(|c| c.pass);
    Ok(AdjointReport { window: i, strands: n, cases, pass })
}
