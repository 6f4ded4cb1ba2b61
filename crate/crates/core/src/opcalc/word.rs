use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qtorus::{Factor, FactorChain};

use super::form::{Context, LinearForm};

/// One factor of an operator word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    /// Φ(L)^{±1}.
    Phi { arg: LinearForm, inv: bool },
    /// θ(L)^{±1}, θ(z) = Φ(z)Φ(−z).
    Theta { arg: LinearForm, inv: bool },
    /// E(L) = e^{2πbL}; for integer ŷ-combinations this is the torus monomial Y^a.
    Exp(LinearForm),
    /// (1 + q^{qexp}·∏arg)^{±1} with `arg` a product of Exp/Binom tokens.
    Binom { qexp: i64, arg: Vec<Token>, inv: bool },
}

impl Token {
    pub fn phi(arg: LinearForm) -> Self {
        Token::Phi { arg, inv: false }
    }

    pub fn phi_inv(arg: LinearForm) -> Self {
        Token::Phi { arg, inv: true }
    }

    pub fn theta(arg: LinearForm) -> Self {
        Token::Theta { arg, inv: false }
    }

    pub fn inverse(&self) -> Token {
        match self {
            Token::Phi { arg, inv } => Token::Phi { arg: arg.clone(), inv: !inv },
            Token::Theta { arg, inv } => Token::Theta { arg: arg.clone(), inv: !inv },
            Token::Exp(l) => Token::Exp(l.neg()),
            Token::Binom { qexp, arg, inv } => Token::Binom { qexp: *qexp, arg: arg.clone(), inv: !inv },
        }
    }

    /// Exp and Binom tokens live in the (skew field of the) quantum torus.
    pub fn is_torus(&self) -> bool {
        matches!(self, Token::Exp(_) | Token::Binom { .. })
    }

    /// Every linear form occurring in the token, nested ones included.
    pub fn forms(&self) -> Vec<&LinearForm> {
        match self {
            Token::Phi { arg, .. } | Token::Theta { arg, .. } | Token::Exp(arg) => vec![arg],
            Token::Binom { arg, .. } => arg.iter().flat_map(|t| t.forms()).collect(),
        }
    }

    fn map_forms(&self, f: &mut dyn FnMut(&LinearForm) -> Result<LinearForm>) -> Result<Token> {
        Ok(match self {
            Token::Phi { arg, inv } => Token::Phi { arg: f(arg)?, inv: *inv },
            Token::Theta { arg, inv } => Token::Theta { arg: f(arg)?, inv: *inv },
            Token::Exp(l) => Token::Exp(f(l)?),
            Token::Binom { qexp, arg, inv } => {
                Token::Binom { qexp: *qexp, arg: arg.iter().map(|t| t.map_forms(f)).collect::<Result<_>>()?, inv: *inv }
            }
        })
    }

    /// Equality modulo the context (centre constraint, θ even).
    pub fn equiv(&self, o: &Token, ctx: &Context) -> bool {
        match (self, o) {
            (Token::Phi { arg: a, inv: i }, Token::Phi { arg: b, inv: j }) => i == j && ctx.equiv(a, b),
            (Token::Theta { arg: a, inv: i }, Token::Theta { arg: b, inv: j }) => {
                i == j && (ctx.equiv(a, b) || ctx.equiv(a, &b.neg()))
            }
            (Token::Exp(a), Token::Exp(b)) => ctx.equiv(a, b),
            (Token::Binom { qexp: p, arg: a, inv: i }, Token::Binom { qexp: r, arg: b, inv: j }) => {
                p == r && i == j && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.equiv(y, ctx))
            }
            _ => false,
        }
    }
}

fn q_string(k: i64) -> String {
    if k == 1 {
        "q".into()
    } else {
        format!("q^{k}")
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sup = |inv: bool| if inv { "^-1" } else { "" };
        match self {
            Token::Phi { arg, inv } => write!(f, "Phi({arg}){}", sup(*inv)),
            Token::Theta { arg, inv } => write!(f, "theta({arg}){}", sup(*inv)),
            Token::Exp(l) => write!(f, "E({l})"),
            Token::Binom { qexp, arg, inv } => {
                let a: Vec<String> = arg.iter().map(|t| t.to_string()).collect();
                let a = a.join("*");
                if *qexp == 0 {
                    write!(f, "(1 + {a}){}", sup(*inv))
                } else {
                    write!(f, "(1 + {}*{a}){}", q_string(*qexp), sup(*inv))
                }
            }
        }
    }
}

impl Serialize for Token {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Central scalar in front of a word: q^{qexp} times θ(L)^{±1} of central
/// arguments (`true` marks an inverse).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Prefactor {
    pub qexp: i64,
    pub thetas: Vec<(LinearForm, bool)>,
}

impl Prefactor {
    pub fn is_one(&self) -> bool {
        self.qexp == 0 && self.thetas.is_empty()
    }
}

impl fmt::Display for Prefactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.qexp != 0 {
            parts.push(q_string(self.qexp));
        }
        for (t, inv) in &self.thetas {
            parts.push(format!("theta({t}){}", if *inv { "^-1" } else { "" }));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        f.write_str(&parts.join("*"))
    }
}

/// A central prefactor times an ordered product of tokens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorWord {
    pub prefactor: Prefactor,
    pub tokens: Vec<Token>,
}

impl OperatorWord {
    pub fn new(tokens: Vec<Token>) -> Self {
        OperatorWord { prefactor: Prefactor::default(), tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn inverse(&self) -> Self {
        OperatorWord {
            prefactor: Prefactor {
                qexp: -self.prefactor.qexp,
                thetas: self.prefactor.thetas.iter().map(|(t, i)| (t.clone(), !i)).collect(),
            },
            tokens: self.tokens.iter().rev().map(Token::inverse).collect(),
        }
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut tokens = self.tokens.clone();
        tokens.extend(o.tokens.iter().cloned());
        let mut thetas = self.prefactor.thetas.clone();
        thetas.extend(o.prefactor.thetas.iter().cloned());
        OperatorWord { prefactor: Prefactor { qexp: self.prefactor.qexp + o.prefactor.qexp, thetas }, tokens }
    }

    /// Token-by-token equality modulo the context, prefactors included.
    pub fn equiv(&self, o: &Self, ctx: &Context) -> bool {
        self.prefactor.qexp == o.prefactor.qexp
            && self.prefactor.thetas.len() == o.prefactor.thetas.len()
            && self.prefactor.thetas.iter().zip(&o.prefactor.thetas).all(|((a, i), (b, j))| i == j && ctx.equiv(a, b))
            && self.tokens.len() == o.tokens.len()
            && self.tokens.iter().zip(&o.tokens).all(|(a, b)| a.equiv(b, ctx))
    }

    /// The value as a factor chain, when every token is an Exp or Binom of
    /// integer ŷ-combinations (after centre substitution) and the prefactor
    /// is a pure q-power.
    pub fn to_chain(&self) -> Result<FactorChain> {
        if !self.prefactor.thetas.is_empty() {
            return Err(Error::InvalidInput("prefactor contains theta scalars".into()));
        }
        let mut chain = tokens_to_chain(&self.tokens)?;
        if self.prefactor.qexp != 0 {
            let size = chain.size;
            chain = FactorChain::monomial(self.prefactor.qexp, vec![0; size]).mul(&chain);
        }
        Ok(chain)
    }
}

fn tokens_to_chain(tokens: &[Token]) -> Result<FactorChain> {
    let size = tokens.iter().flat_map(|t| t.forms()).map(|f| f.size()).next().unwrap_or(0);
    let mut factors = Vec::new();
    for t in tokens {
        match t {
            Token::Exp(l) => {
                let exps = l
                    .integer_exponents()
                    .ok_or_else(|| Error::InvalidInput(format!("E({l}) is not a torus monomial")))?;
                factors.push(Factor::Mono { qexp: 0, exps });
            }
            Token::Binom { qexp, arg, inv } => {
                factors.push(Factor::Binom { qexp: *qexp, arg: tokens_to_chain(arg)?, inverse: *inv })
            }
            other => return Err(Error::InvalidInput(format!("{other} is not a torus element"))),
        }
    }
    Ok(FactorChain { size, factors })
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.tokens.iter().map(|t| t.to_string()).collect();
        let body = if body.is_empty() { "1".to_string() } else { body.join(" ") };
        if self.prefactor.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "{} * {body}", self.prefactor)
        }
    }
}

/// Which way a rule moves or rewrites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Shift/theta: the operator at `pos` moves right past `pos + 1`.
    /// Pentagon: two tokens become three.
    Forward,
    /// Shift/theta: the operator at `pos + 1` moves left past `pos`.
    /// Pentagon: three tokens become two.
    Backward,
}

/// A rule application, as written in proof scripts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Rule {
    Shift { pos: usize, dir: Direction },
    Pentagon { pos: usize, dir: Direction, choice: Option<usize> },
    Theta { pos: usize, dir: Direction },
    Fuse { pos: usize },
    Split { pos: usize },
    Commute { pos: usize },
    Cancel { pos: usize },
    Merge { pos: usize },
    Center { pos: usize, window: usize },
    Scalar { pos: usize },
    Insert { pos: usize, token: Token },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Shift { .. } => "shift",
            Rule::Pentagon { .. } => "pentagon",
            Rule::Theta { .. } => "theta",
            Rule::Fuse { .. } => "fuse",
            Rule::Split { .. } => "split",
            Rule::Commute { .. } => "commute",
            Rule::Cancel { .. } => "cancel",
            Rule::Merge { .. } => "merge",
            Rule::Center { .. } => "center",
            Rule::Scalar { .. } => "scalar",
            Rule::Insert { .. } => "insert",
        }
    }

    pub fn position(&self) -> usize {
        match self {
            Rule::Shift { pos, .. }
            | Rule::Pentagon { pos, .. }
            | Rule::Theta { pos, .. }
            | Rule::Fuse { pos }
            | Rule::Split { pos }
            | Rule::Commute { pos }
            | Rule::Cancel { pos }
            | Rule::Merge { pos }
            | Rule::Center { pos, .. }
            | Rule::Scalar { pos }
            | Rule::Insert { pos, .. } => *pos,
        }
    }
}

/// One checked side condition: [left, right] = value·(i/2π).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub left: String,
    pub right: String,
    pub commutator: String,
}

/// The record of one rewrite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: Rule,
    pub evidence: Vec<Evidence>,
    pub note: String,
}

fn evidence(ctx: &Context, l: &LinearForm, m: &LinearForm) -> Result<(Rational64, Evidence)> {
    let v = ctx.commutator(l, m)?;
    Ok((v, Evidence { left: l.to_string(), right: m.to_string(), commutator: v.to_string() }))
}

fn inapplicable(rule: &str, pos: usize, msg: impl fmt::Display) -> Error {
    Error::Inapplicable(format!("{rule} at {pos}: {msg}"))
}

fn window<'a>(w: &'a OperatorWord, pos: usize, len: usize, rule: &str) -> Result<&'a [Token]> {
    w.tokens.get(pos..pos + len).ok_or_else(|| inapplicable(rule, pos, format!("needs {len} tokens")))
}

fn splice(w: &OperatorWord, pos: usize, len: usize, new: Vec<Token>) -> OperatorWord {
    let mut tokens = w.tokens[..pos].to_vec();
    tokens.extend(new);
    tokens.extend(w.tokens[pos + len..].iter().cloned());
    OperatorWord { prefactor: w.prefactor.clone(), tokens }
}

fn integer(v: Rational64, rule: &str, pos: usize) -> Result<i64> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(inapplicable(rule, pos, format!("non-integer shift multiple {v}")))
    }
}

/// Φ(L − iγb)/Φ(L) as commuting binomials in E(L).
fn shift_ratio(l: &LinearForm, gamma: i64) -> Vec<Token> {
    let e = || vec![Token::Exp(l.clone())];
    if gamma > 0 {
        (1..=gamma).map(|m| Token::Binom { qexp: 1 - 2 * m, arg: e(), inv: true }).collect()
    } else {
        (1..=-gamma).map(|m| Token::Binom { qexp: 2 * m - 1, arg: e(), inv: false }).collect()
    }
}

/// Φ(L)^{±1}·X·Φ(L)^{∓1} for a torus token X (`inv` selects Φ^{-1}·X·Φ).
fn conj_phi(ctx: &Context, l: &LinearForm, inv: bool, x: &Token, ev: &mut Vec<Evidence>, pos: usize) -> Result<Vec<Token>> {
    match x {
        Token::Exp(m) => {
            let (v, e) = evidence(ctx, m, l)?;
            ev.push(e);
            let g = integer(v, "shift", pos)?;
            let mut out = vec![x.clone()];
            out.extend(shift_ratio(l, g).into_iter().map(|t| if inv { t.inverse() } else { t }));
            Ok(out)
        }
        Token::Binom { qexp, arg, inv: bi } => {
            let mut a = Vec::new();
            for t in arg {
                a.extend(conj_phi(ctx, l, inv, t, ev, pos)?);
            }
            Ok(vec![Token::Binom { qexp: *qexp, arg: a, inv: *bi }])
        }
        other => Err(inapplicable("shift", pos, format!("{other} is not a torus token"))),
    }
}

/// Moves a Φ past a torus token using Φ(z ± ib) = (1 + q^{±1}e^{2πbz})^{±1}Φ(z).
pub fn apply_shift(ctx: &Context, w: &OperatorWord, pos: usize, dir: Direction) -> Result<(OperatorWord, Step)> {
    let pair = window(w, pos, 2, "shift")?;
    let mut ev = Vec::new();
    let new = match (dir, &pair[0], &pair[1]) {
        (Direction::Forward, phi @ Token::Phi { arg, inv }, x) if x.is_torus() => {
            let mut out = conj_phi(ctx, arg, *inv, x, &mut ev, pos)?;
            out.push(phi.clone());
            out
        }
        (Direction::Backward, Token::Exp(m), phi @ Token::Phi { arg, inv }) => {
            // E(M)Φ(L)^s = Φ(L)^s·(Φ(L+iγb)/Φ(L))^s·E(M)
            let (v, e) = evidence(ctx, m, arg)?;
            ev.push(e);
            let g = integer(v, "shift", pos)?;
            let mut out = vec![phi.clone()];
            out.extend(shift_ratio(arg, -g).into_iter().map(|t| if *inv { t.inverse() } else { t }));
            out.push(Token::Exp(m.clone()));
            out
        }
        (Direction::Backward, x, phi @ Token::Phi { arg, inv }) if x.is_torus() => {
            let mut out = vec![phi.clone()];
            out.extend(conj_phi(ctx, arg, !inv, x, &mut ev, pos)?);
            out
        }
        _ => return Err(inapplicable("shift", pos, "needs a Phi next to an E or binomial token")),
    };
    let step = Step { rule: Rule::Shift { pos, dir }, evidence: ev, note: String::new() };
    Ok((splice(w, pos, 2, new), step))
}

/// θ(L)^{±1}·T(M)·θ(L)^{∓1} = T(M ± [L,M]·L), for [L,M] an integer multiple of i/2π.
fn conj_theta(ctx: &Context, l: &LinearForm, inv: bool, x: &Token, ev: &mut Vec<Evidence>, pos: usize) -> Result<Token> {
    x.map_forms(&mut |m| {
        let (v, e) = evidence(ctx, l, m)?;
        ev.push(e);
        if !v.is_integer() {
            return Err(inapplicable("theta", pos, format!("[{l}, {m}] = {v}·i/2π is not an integer multiple")));
        }
        let v = if inv { -v } else { v };
        Ok(m.add(&l.scale(v)))
    })
}

/// Moves θ past a neighbouring token, shifting its arguments.
pub fn apply_theta(ctx: &Context, w: &OperatorWord, pos: usize, dir: Direction) -> Result<(OperatorWord, Step)> {
    let pair = window(w, pos, 2, "theta")?;
    let mut ev = Vec::new();
    let new = match (dir, &pair[0], &pair[1]) {
        (Direction::Forward, th @ Token::Theta { arg, inv }, x) => {
            vec![conj_theta(ctx, arg, *inv, x, &mut ev, pos)?, th.clone()]
        }
        (Direction::Backward, x, th @ Token::Theta { arg, inv }) => {
            vec![th.clone(), conj_theta(ctx, arg, !inv, x, &mut ev, pos)?]
        }
        _ => return Err(inapplicable("theta", pos, "needs a theta on the moving side")),
    };
    let step = Step { rule: Rule::Theta { pos, dir }, evidence: ev, note: String::new() };
    Ok((splice(w, pos, 2, new), step))
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    X,
    P,
    S,
}

/// The relator Φ(X)Φ(P)Φ(X)^{-1}Φ(X+P)^{-1}Φ(P)^{-1} = 1, [X,P] = i/2π.
const RELATOR: [(Role, bool); 5] = [(Role::X, false), (Role::P, false), (Role::X, true), (Role::S, true), (Role::P, true)];

fn relator_words() -> Vec<Vec<(Role, bool)>> {
    let inv: Vec<(Role, bool)> = RELATOR.iter().rev().map(|(r, i)| (*r, !i)).collect();
    let mut out = Vec::new();
    for base in [RELATOR.to_vec(), inv] {
        for s in 0..5 {
            out.push((0..5).map(|k| base[(s + k) % 5]).collect());
        }
    }
    out
}

/// Rewrites by the pentagon identity Φ(X)Φ(P) = Φ(P)Φ(X+P)Φ(X), [X,P] = i/2π,
/// in any of its cyclic forms: Forward replaces two adjacent Φ-tokens by three,
/// Backward three by two. When several instantiations apply, `choice` picks one.
pub fn apply_pentagon(
    ctx: &Context,
    w: &OperatorWord,
    pos: usize,
    dir: Direction,
    choice: Option<usize>,
) -> Result<(OperatorWord, Step)> {
    let k = if dir == Direction::Forward { 2 } else { 3 };
    let win = window(w, pos, k, "pentagon")?;
    let mut phis = Vec::new();
    for t in win {
        match t {
            Token::Phi { arg, inv } => phis.push((arg, *inv)),
            other => return Err(inapplicable("pentagon", pos, format!("{other} is not a Phi token"))),
        }
    }
    let mut found: Vec<(Vec<Token>, LinearForm, LinearForm)> = Vec::new();
    let mut last_comm = None;
    for word in relator_words() {
        let pattern = &word[..k];
        if pattern.iter().zip(&phis).any(|((_, i), (_, j))| i != j) {
            continue;
        }
        let get = |r: Role| pattern.iter().zip(&phis).find(|((q, _), _)| *q == r).map(|(_, (a, _))| (*a).clone());
        let (x, p) = match (get(Role::X), get(Role::P), get(Role::S)) {
            (Some(x), Some(p), _) => (x, p),
            (Some(x), None, Some(s)) => {
                let p = s.sub(&x);
                (x, p)
            }
            (None, Some(p), Some(s)) => (s.sub(&p), p),
            _ => continue,
        };
        let s = x.add(&p);
        let form = |r: Role| match r {
            Role::X => &x,
            Role::P => &p,
            Role::S => &s,
        };
        if !pattern.iter().zip(&phis).all(|((r, _), (a, _))| ctx.equiv(form(*r), a)) {
            continue;
        }
        let v = ctx.commutator(&x, &p)?;
        last_comm = Some((x.clone(), p.clone(), v));
        if v != Rational64::one() {
            continue;
        }
        let rest: Vec<Token> = word[k..]
            .iter()
            .rev()
            .map(|(r, i)| Token::Phi { arg: form(*r).clone(), inv: !i })
            .collect();
        if !found.iter().any(|(f, _, _)| f.len() == rest.len() && f.iter().zip(&rest).all(|(a, b)| a.equiv(b, ctx))) {
            found.push((rest, x, p));
        }
    }
    if found.is_empty() {
        let msg = match last_comm {
            Some((x, p, v)) => format!("[{x}, {p}] = {v}·i/2π, pentagon needs exactly i/2π"),
            None => "tokens do not match any form of the pentagon identity".into(),
        };
        return Err(inapplicable("pentagon", pos, msg));
    }
    let idx = match (found.len(), choice) {
        (1, None) => 0,
        (_, Some(c)) if c < found.len() => c,
        (n, c) => {
            let opts: Vec<String> = found
                .iter()
                .enumerate()
                .map(|(i, (t, _, _))| format!("{i}: {}", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
                .collect();
            return Err(inapplicable(
                "pentagon",
                pos,
                format!("{n} instantiations (choice {c:?}); options {}", opts.join("; ")),
            ));
        }
    };
    let (rest, x, p) = found.swap_remove(idx);
    let (_, e) = evidence(ctx, &x, &p)?;
    let step = Step { rule: Rule::Pentagon { pos, dir, choice }, evidence: vec![e], note: format!("X = {x}, P = {p}") };
    Ok((splice(w, pos, k, rest), step))
}

/// Φ(L)Φ(−L) → θ(L) (either order; inverses give θ(L)^{-1}).
pub fn apply_fuse(ctx: &Context, w: &OperatorWord, pos: usize) -> Result<(OperatorWord, Step)> {
    let pair = window(w, pos, 2, "fuse")?;
    match (&pair[0], &pair[1]) {
        (Token::Phi { arg: a, inv: i }, Token::Phi { arg: b, inv: j }) if i == j && ctx.equiv(a, &b.neg()) => {
            let step = Step { rule: Rule::Fuse { pos }, evidence: vec![], note: format!("Phi({a})Phi({b}) = theta({a})") };
            Ok((splice(w, pos, 2, vec![Token::Theta { arg: a.clone(), inv: *i }]), step))
        }
        _ => Err(inapplicable("fuse", pos, "needs Phi(L)Phi(-L)")),
    }
}

/// θ(L) → Φ(L)Φ(−L).
pub fn apply_split(w: &OperatorWord, pos: usize) -> Result<(OperatorWord, Step)> {
    match window(w, pos, 1, "split")?[0].clone() {
        Token::Theta { arg, inv } => {
            let pair = vec![Token::Phi { arg: arg.clone(), inv }, Token::Phi { arg: arg.neg(), inv }];
            let step = Step { rule: Rule::Split { pos }, evidence: vec![], note: String::new() };
            Ok((splice(w, pos, 1, pair), step))
        }
        _ => Err(inapplicable("split", pos, "needs a theta token")),
    }
}

/// Swaps two adjacent tokens whose arguments commute.
pub fn apply_commute(ctx: &Context, w: &OperatorWord, pos: usize) -> Result<(OperatorWord, Step)> {
    let pair = window(w, pos, 2, "commute")?;
    let mut ev = Vec::new();
    for l in pair[0].forms() {
        for m in pair[1].forms() {
            let (v, e) = evidence(ctx, l, m)?;
            ev.push(e);
            if !v.is_zero() {
                return Err(inapplicable("commute", pos, format!("[{l}, {m}] = {v}·i/2π")));
            }
        }
    }
    let step = Step { rule: Rule::Commute { pos }, evidence: ev, note: String::new() };
    Ok((splice(w, pos, 2, vec![pair[1].clone(), pair[0].clone()]), step))
}

/// T·T^{-1} → 1.
pub fn apply_cancel(ctx: &Context, w: &OperatorWord, pos: usize) -> Result<(OperatorWord, Step)> {
    let pair = window(w, pos, 2, "cancel")?;
    if !pair[0].inverse().equiv(&pair[1], ctx) {
        return Err(inapplicable("cancel", pos, format!("{} and {} are not inverse", pair[0], pair[1])));
    }
    let step = Step { rule: Rule::Cancel { pos }, evidence: vec![], note: String::new() };
    Ok((splice(w, pos, 2, vec![]), step))
}

/// E(A)E(B) → q^{[A,B]}E(A+B), [A,B] in units of i/2π.
pub fn apply_merge(ctx: &Context, w: &OperatorWord, pos: usize) -> Result<(OperatorWord, Step)> {
    let pair = window(w, pos, 2, "merge")?;
    let (Token::Exp(a), Token::Exp(b)) = (&pair[0], &pair[1]) else {
        return Err(inapplicable("merge", pos, "needs two E tokens"));
    };
    let (v, e) = evidence(ctx, a, b)?;
    let k = integer(v, "merge", pos)?;
    let mut out = splice(w, pos, 2, vec![Token::Exp(a.add(b))]);
    out.prefactor.qexp += k;
    let step = Step { rule: Rule::Merge { pos }, evidence: vec![e], note: format!("q^{k}") };
    Ok((out, step))
}

/// Replaces c inside E tokens (nested ones included) using the constraint of
/// window i: e^{2πbc} = Y_{3i+2}Y_{3i+3} (Y_{3i−1}Y_{3i} in the last window)
/// and e^{−2πbc} = Y_{3i−1}^{-1}Y_{3i}^{-1}. Both are central monomials, so
/// no q-power arises.
pub fn substitute_center(ctx: &Context, w: &OperatorWord, pos: usize, window_i: usize) -> Result<(OperatorWord, Step)> {
    let n = match (ctx.center_active(), ctx.strands()) {
        (true, Some(n)) => n,
        _ => return Err(Error::InvalidInput("centre constraint is not active".into())),
    };
    if window_i == 0 || window_i > n {
        return Err(Error::IndexOutOfRange { index: window_i, size: n });
    }
    let m = ctx.size();
    let pair = |a: usize| ctx.y(a).add(&ctx.y(a + 1));
    let plus = if 3 * window_i + 3 <= m { pair(3 * window_i + 2) } else { pair(3 * window_i - 1) };
    let minus = pair(3 * window_i - 1);
    let tok = window(w, pos, 1, "center")?[0].clone();
    if !tok.is_torus() {
        return Err(inapplicable("center", pos, "needs an E or binomial token"));
    }
    fn sub(t: &Token, plus: &LinearForm, minus: &LinearForm) -> Token {
        match t {
            Token::Exp(l) if !l.c.is_zero() => {
                let k = l.c;
                let mut base = l.clone();
                base.c = Rational64::zero();
                let rep = if k > Rational64::zero() { plus.scale(k) } else { minus.scale(k) };
                Token::Exp(base.add(&rep))
            }
            Token::Binom { qexp, arg, inv } => {
                Token::Binom { qexp: *qexp, arg: arg.iter().map(|x| sub(x, plus, minus)).collect(), inv: *inv }
            }
            other => other.clone(),
        }
    }
    let new = sub(&tok, &plus, &minus);
    let step = Step {
        rule: Rule::Center { pos, window: window_i },
        evidence: vec![],
        note: format!("E(c) = E({plus}), E(-c) = E(-({minus}))"),
    };
    Ok((splice(w, pos, 1, vec![new]), step))
}

/// Moves θ of a central argument into the prefactor.
pub fn apply_scalar(ctx: &Context, w: &OperatorWord, pos: usize) -> Result<(OperatorWord, Step)> {
    match window(w, pos, 1, "scalar")?[0].clone() {
        Token::Theta { arg, inv } if ctx.canonical(&arg).is_scalar() => {
            let mut out = splice(w, pos, 1, vec![]);
            out.prefactor.thetas.push((arg, inv));
            let step = Step { rule: Rule::Scalar { pos }, evidence: vec![], note: String::new() };
            Ok((out, step))
        }
        _ => Err(inapplicable("scalar", pos, "needs theta of a central argument")),
    }
}

/// 1 → T·T^{-1} at `pos`.
pub fn apply_insert(w: &OperatorWord, pos: usize, token: &Token) -> Result<(OperatorWord, Step)> {
    if pos > w.len() {
        return Err(inapplicable("insert", pos, "position past the end"));
    }
    let step = Step { rule: Rule::Insert { pos, token: token.clone() }, evidence: vec![], note: String::new() };
    Ok((splice(w, pos, 0, vec![token.clone(), token.inverse()]), step))
}

/// Applies one rule.
pub fn apply_rule(ctx: &Context, w: &OperatorWord, rule: &Rule) -> Result<(OperatorWord, Step)> {
    match *rule {
        Rule::Shift { pos, dir } => apply_shift(ctx, w, pos, dir),
        Rule::Pentagon { pos, dir, choice } => apply_pentagon(ctx, w, pos, dir, choice),
        Rule::Theta { pos, dir } => apply_theta(ctx, w, pos, dir),
        Rule::Fuse { pos } => apply_fuse(ctx, w, pos),
        Rule::Split { pos } => apply_split(w, pos),
        Rule::Commute { pos } => apply_commute(ctx, w, pos),
        Rule::Cancel { pos } => apply_cancel(ctx, w, pos),
        Rule::Merge { pos } => apply_merge(ctx, w, pos),
        Rule::Center { pos, window } => substitute_center(ctx, w, pos, window),
        Rule::Scalar { pos } => apply_scalar(ctx, w, pos),
        Rule::Insert { pos, ref token } => apply_insert(w, pos, token),
    }
}

/// Ratio helper exposed for tests: the binomials emitted when E(M) passes Φ(L).
pub fn shift_factors(ctx: &Context, m: &LinearForm, l: &LinearForm) -> Result<Vec<Token>> {
    let v = ctx.commutator(m, l)?;
    Ok(shift_ratio(l, integer(v, "shift", 0)?))
}
