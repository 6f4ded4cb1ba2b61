use serde::Serialize;

use crate::error::{Error, Result};

use super::adjoint::{r_word, Derivation};
use super::form::Context;
use super::word::{apply_rule, Direction, Evidence, OperatorWord, Rule, Token};

/// The checked-in derivation of R^1R^2R^1 = R^2R^1R^2 for three strands.
pub const BRAID_N3_SCRIPT: &str = include_str!("../../proofs/braid_n3.steps");

enum Item {
    Rule(Rule),
    Expect(OperatorWord),
}

/// A parsed proof script.
pub struct Script {
    pub strands: usize,
    pub lhs: OperatorWord,
    pub rhs: OperatorWord,
    items: Vec<(usize, Item)>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos: line, msg: format!("line {line}: {}", msg.into()) }
}

/// Parses a word such as `R1 Phi(y4+y5)^-1 theta(c+y7) E(y2)`.
pub fn parse_word(ctx: &Context, text: &str) -> Result<OperatorWord> {
    let mut w = OperatorWord::new(vec![]);
    for item in text.split_whitespace() {
        let (body, inv) = match item.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (item, false),
        };
        if let Some(i) = body.strip_prefix('R') {
            let i: usize = i.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad token `{item}`") })?;
            let r = r_word(ctx, i)?;
            w = w.concat(&if inv { r.inverse() } else { r });
            continue;
        }
        let (head, arg) = body
            .strip_suffix(')')
            .and_then(|b| b.split_once('('))
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("bad token `{item}`") })?;
        let f = ctx.parse(arg)?;
        let t = match head {
            "Phi" => Token::Phi { arg: f, inv },
            "theta" => Token::Theta { arg: f, inv },
            "E" => Token::Exp(if inv { f.neg() } else { f }),
            _ => return Err(Error::Parse { pos: 0, msg: format!("unknown token `{head}`") }),
        };
        w.tokens.push(t);
    }
    Ok(w)
}

fn direction(s: Option<&str>, line: usize) -> Result<Direction> {
    match s {
        Some("fwd" | "right") => Ok(Direction::Forward),
        Some("back" | "left") => Ok(Direction::Backward),
        other => Err(perr(line, format!("expected a direction, found {other:?}"))),
    }
}

/// Parses the line format `rule position [direction] [choice]`, plus the
/// header lines `strands n`, `lhs <word>`, `rhs <word>` and checkpoints
/// `expect <word>`. `#` starts a comment.
pub fn parse_script(text: &str) -> Result<Script> {
    let mut strands = None;
    let mut ctx = None;
    let (mut lhs, mut rhs) = (None, None);
    let mut items = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        if head == "strands" {
            let n: usize = rest.parse().map_err(|_| perr(line, "bad strand count"))?;
            strands = Some(n);
            ctx = Some(Context::braid(n, true)?);
            continue;
        }
        let c = ctx.as_ref().ok_or_else(|| perr(line, "`strands` must come first"))?;
        let word = |s: &str| parse_word(c, s).map_err(|e| perr(line, e.to_string()));
        match head {
            "lhs" => lhs = Some(word(rest)?),
            "rhs" => rhs = Some(word(rest)?),
            "expect" => items.push((line, Item::Expect(word(rest)?))),
            _ => {
                let mut args = rest.split_whitespace();
                let pos: usize = args
                    .next()
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| perr(line, "missing position"))?;
                let rule = match head {
                    "shift" => Rule::Shift { pos, dir: direction(args.next(), line)? },
                    "theta" => Rule::Theta { pos, dir: direction(args.next(), line)? },
                    "pentagon" => {
                        let dir = direction(args.next(), line)?;
                        let choice = match args.next() {
                            Some(c) => Some(c.parse().map_err(|_| perr(line, "bad choice"))?),
                            None => None,
                        };
                        Rule::Pentagon { pos, dir, choice }
                    }
                    "fuse" => Rule::Fuse { pos },
                    "split" => Rule::Split { pos },
                    "commute" => Rule::Commute { pos },
                    "cancel" => Rule::Cancel { pos },
                    "merge" => Rule::Merge { pos },
                    "scalar" => Rule::Scalar { pos },
                    "center" => {
                        let window = args.next().and_then(|w| w.parse().ok()).ok_or_else(|| perr(line, "missing window"))?;
                        Rule::Center { pos, window }
                    }
                    "insert" => {
                        let t = word(args.next().ok_or_else(|| perr(line, "missing token"))?)?;
                        match <[Token; 1]>::try_from(t.tokens) {
                            Ok([t]) => Rule::Insert { pos, token: t },
                            Err(_) => return Err(perr(line, "insert takes one token")),
                        }
                    }
                    other => return Err(perr(line, format!("unknown rule `{other}`"))),
                };
                if args.next().is_some() {
                    return Err(perr(line, "trailing arguments"));
                }
                items.push((line, Item::Rule(rule)));
            }
        }
    }
    Ok(Script {
        strands: strands.ok_or_else(|| perr(0, "missing `strands`"))?,
        lhs: lhs.ok_or_else(|| perr(0, "missing `lhs`"))?,
        rhs: rhs.ok_or_else(|| perr(0, "missing `rhs`"))?,
        items,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofStep {
    pub index: usize,
    pub line: usize,
    pub rule: String,
    pub position: usize,
    pub evidence: Vec<Evidence>,
    pub note: String,
    pub word: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofReport {
    pub strands: usize,
    pub lhs: String,
    pub rhs: String,
    pub steps: Vec<ProofStep>,
    pub checkpoints: usize,
    pub final_word: String,
    /// Central factor left over when the token lists agree but prefactors differ.
    pub residual: Option<String>,
    pub failure: Option<String>,
    pub pass: bool,
}

/// Replays a script: every step's side condition is re-checked, checkpoints
/// must match, and the final word must equal the right-hand side.
pub fn replay(text: &str) -> Result<ProofReport> {
    let script = parse_script(text)?;
    let ctx = Context::braid(script.strands, true)?;
    let mut w = script.lhs.clone();
    let mut steps = Vec::new();
    let mut checkpoints = 0;
    let mut failure = None;
    for (line, item) in &script.items {
        match item {
            Item::Rule(rule) => match apply_rule(&ctx, &w, rule) {
                Ok((next, step)) => {
                    w = next;
                    steps.push(ProofStep {
                        index: steps.len() + 1,
                        line: *line,
                        rule: rule.name().into(),
                        position: rule.position(),
                        evidence: step.evidence,
                        note: step.note,
                        word: w.to_string(),
                    });
                }
                Err(e) => {
                    failure = Some(format!("step {} (line {line}): {e}; word {w}", steps.len() + 1));
                    break;
                }
            },
            Item::Expect(target) => {
                if !w.equiv(target, &ctx) {
                    failure = Some(format!("checkpoint at line {line} differs: have {w}, expected {target}"));
                    break;
                }
                checkpoints += 1;
            }
        }
    }
    let mut residual = None;
    if failure.is_none() {
        let same_tokens = w.tokens.len() == script.rhs.tokens.len()
            && w.tokens.iter().zip(&script.rhs.tokens).all(|(a, b)| a.equiv(b, &ctx));
        if !same_tokens {
            failure = Some(format!("final word {w} differs from {}", script.rhs));
        } else if !w.equiv(&script.rhs, &ctx) {
            residual = Some(format!("{} vs {}", w.prefactor, script.rhs.prefactor));
        }
    }
    let pass = failure.is_none() && residual.is_none();
    Ok(ProofReport {
        strands: script.strands,
        lhs: script.lhs.to_string(),
        rhs: script.rhs.to_string(),
        steps,
        checkpoints,
        final_word: w.to_string(),
        residual,
        failure,
        pass,
    })
}

/// Replays the built-in three-strand braid derivation.
pub fn replay_braid_proof() -> Result<ProofReport> {
    replay(BRAID_N3_SCRIPT)
}

/// Re-applies every recorded rule of a derivation and checks that the same
/// words and side conditions come out.
pub fn audit(ctx: &Context, d: &Derivation) -> Result<()> {
    let mut w = d.initial.clone();
    for (k, s) in d.steps.iter().enumerate() {
        let (next, again) = apply_rule(ctx, &w, &s.rule)?;
        if again.evidence != s.evidence {
            return Err(Error::RelationFailure(format!("step {} evidence differs on replay", k + 1)));
        }
        w = next;
    }
    if w != d.result {
        return Err(Error::RelationFailure("replayed derivation ends in a different word".into()));
    }
    Ok(())
}
