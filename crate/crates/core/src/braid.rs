//! The braid-group exchange matrix and the classical R-operator.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{ClusterSeed, ExchangeMatrix, Seed, YSeed};
use crate::error::{Error, Result};
use crate::exact::RatFunc;

/// The (3n+1)×(3n+1) exchange matrix attached to the braid group on n strands.
///
/// Block i (1-based) couples positions a=3i−2, u=3i−1, v=3i, c=3i+1 through
/// b_{au}=1, b_{av}=−1, b_{uc}=1, b_{vc}=−1.
pub fn build_braid_matrix(n: usize) -> Result<ExchangeMatrix> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("braid matrix needs n >= 2 strands, got {n}")));
    }
    let mut b = ExchangeMatrix::zero(3 * n + 1);
    for i in 1..=n {
        let a = 3 * i - 3;
        let (u, v, c) = (a + 1, a + 2, a + 3);
        b.set_pair(a, u, 1);
        b.set_pair(a, v, -1);
        b.set_pair(u, c, 1);
        b.set_pair(v, c, -1);
    }
    Ok(b)
}

/// Strand count implied by a (3n+1)-dimensional seed.
pub fn strands_for_size(size: usize) -> Result<usize> {
    if size < 7 || (size - 1) % 3 != 0 {
        return Err(Error::SizeMismatch(format!("size {size} is not 3n+1 with n >= 2")));
    }
    Ok((size - 1) / 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidLetter {
    /// Generator index, 1-based.
    pub index: usize,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::InvalidInput("a braid needs at least 2 strands".into()));
        }
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::IndexOutOfRange { index: l.index, size: strands - 1 });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parses whitespace-separated tokens `s<k>` and `s<k>^-1`.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for (pos, tok) in text.split_whitespace().enumerate() {
            let bad = || Error::Parse { pos, msg: format!("bad braid letter {tok:?}") };
            let body = tok.strip_prefix('s').ok_or_else(bad)?;
            let (idx, inverse) = match body.split_once('^') {
                Some((i, "-1")) => (i, true),
                Some(_) => return Err(bad()),
                None => (body, false),
            };
            let index: usize = idx.parse().map_err(|_| bad())?;
            letters.push(BraidLetter { index, inverse });
        }
        Self::new(strands, letters)
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.inverse { format!("s{}^-1", l.index) } else { format!("s{}", l.index) })
            .collect();
        f.write_str(&toks.join(" "))
    }
}

const R_X: [&str; 7] = [
    "x1",
    "x5",
    "(x1*x3*x5 + x3*x4*x5 + x1*x2*x6)/(x2*x4)",
    "(x1*x3*x4*x5 + x3*x4^2*x5 + x1*x3*x5*x7 + x3*x4*x5*x7 + x1*x2*x6*x7)/(x2*x4*x6)",
    "(x3*x4*x5 + x3*x5*x7 + x2*x6*x7)/(x4*x6)",
    "x3",
    "x7",
];

const R_Y: [&str; 7] = [
    "y1*(1 + y2 + y2*y4)",
    "y2*y4*y5*y6/(1 + y2 + y6 + y2*y6 + y2*y4*y6)",
    "(1 + y2 + y6 + y2*y6 + y2*y4*y6)/(y2*y4)",
    "y4/((1 + y2 + y2*y4)*(1 + y6 + y4*y6))",
    "(1 + y2 + y6 + y2*y6 + y2*y4*y6)/(y4*y6)",
    "y2*y3*y4*y6/(1 + y2 + y6 + y2*y6 + y2*y4*y6)",
    "(1 + y6 + y4*y6)*y7",
];

fn parsed(table: &'static [&'static str; 7], cell: &'static OnceLock<Vec<RatFunc>>) -> &'static [RatFunc] {
    cell.get_or_init(|| table.iter().map(|s| RatFunc::parse(s).expect("valid closed form")).collect())
}

/// The 7-variable closed form of the R-operator on x-variables.
pub fn r_x_window() -> &'static [RatFunc] {
    static CELL: OnceLock<Vec<RatFunc>> = OnceLock::new();
    parsed(&R_X, &CELL)
}

/// The 7-variable closed form of the R-operator on y-variables.
pub fn r_y_window() -> &'static [RatFunc] {
    static CELL: OnceLock<Vec<RatFunc>> = OnceLock::new();
    parsed(&R_Y, &CELL)
}

/// Which variable family a seed carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    X,
    Y,
}

/// Seeds on which the R-operator acts.
pub trait BraidSeed: Seed + Sync + Send {
    fn window_map() -> &'static [RatFunc];
}

impl BraidSeed for ClusterSeed {
    fn window_map() -> &'static [RatFunc] {
        r_x_window()
    }
}

impl BraidSeed for YSeed {
    fn window_map() -> &'static [RatFunc] {
        r_y_window()
    }
}

fn check_generator<S: Seed>(s: &S, i: usize) -> Result<usize> {
    let n = strands_for_size(s.matrix().size())?;
    if s.matrix() != &build_braid_matrix(n)? {
        return Err(Error::InvalidInput("seed matrix is not the braid exchange matrix".into()));
    }
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n - 1 });
    }
    Ok(n)
}

/// Applies generator `i` through the closed form on positions 3i−2..3i+4.
pub fn apply_r<S: BraidSeed>(s: &S, i: usize) -> Result<S> {
    check_generator(s, i)?;
    let start = 3 * i - 3;
    let window = &s.vars()[start..start + 7];
    let images: Vec<RatFunc> = S::window_map()
        .par_iter()
        .map(|f| f.compose(window))
        .collect::<Result<_>>()?;
    let mut vars = s.vars().to_vec();
    vars[start..start + 7].clone_from_slice(&images);
    Ok(S::with_parts(vars, s.matrix().clone()))
}

/// Elementary step of the R-operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Mutate(usize),
    Swap(usize, usize),
}

/// Steps of generator `i` in application order: μ_{3i+1}, μ_{3i+3}, μ_{3i−1},
/// μ_{3i+1}, then s_{3i,3i+3}, s_{3i−1,3i+2}, s_{3i,3i+2}.
pub fn r_steps(i: usize) -> [Step; 7] {
    [
        Step::Mutate(3 * i + 1),
        Step::Mutate(3 * i + 3),
        Step::Mutate(3 * i - 1),
        Step::Mutate(3 * i + 1),
        Step::Swap(3 * i, 3 * i + 3),
        Step::Swap(3 * i - 1, 3 * i + 2),
        Step::Swap(3 * i, 3 * i + 2),
    ]
}

fn run_steps<S: Seed>(s: &S, steps: impl IntoIterator<Item = Step>) -> Result<S> {
    let mut cur = s.clone();
    for st in steps {
        cur = match st {
            Step::Mutate(k) => cur.mutate(k)?,
            Step::Swap(a, b) => cur.permute(a, b)?,
        };
    }
    Ok(cur)
}

/// Generator `i` as the literal mutation/permutation composition.
pub fn apply_r_by_mutations<S: Seed>(s: &S, i: usize) -> Result<S> {
    check_generator(s, i)?;
    run_steps(s, r_steps(i))
}

/// Inverse of generator `i`: the step word reversed (each step is an involution).
pub fn apply_r_inverse<S: Seed>(s: &S, i: usize) -> Result<S> {
    check_generator(s, i)?;
    run_steps(s, r_steps(i).into_iter().rev())
}

/// Applies the letters left to right.
pub fn evaluate_braid_word<S: BraidSeed>(w: &BraidWord, s: &S) -> Result<S> {
    let n = strands_for_size(s.matrix().size())?;
    if n != w.strands {
        return Err(Error::SizeMismatch(format!("word on {} strands, seed for {n}", w.strands)));
    }
    let mut cur = s.clone();
    for l in &w.letters {
        cur = if l.inverse { apply_r_inverse(&cur, l.index)? } else { apply_r(&cur, l.index)? };
    }
    Ok(cur)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidRelationReport {
    pub strands: usize,
    pub mode: Mode,
    pub results: Vec<IdentityResult>,
}

impl BraidRelationReport {
    pub fn pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

fn word(n: usize, idx: &[usize]) -> BraidWord {
    BraidWord::new(n, idx.iter().map(|&i| BraidLetter { index: i, inverse: false }).collect()).unwrap()
}

fn check_relations<S: BraidSeed>(n: usize, seed: &S) -> Result<Vec<IdentityResult>> {
    let mut pairs: Vec<(BraidWord, BraidWord)> = Vec::new();
    for i in 1..n.saturating_sub(1) {
        pairs.push((word(n, &[i, i + 1, i]), word(n, &[i + 1, i, i + 1])));
    }
    for i in 1..n {
        for j in i + 2..n {
            pairs.push((word(n, &[i, j]), word(n, &[j, i])));
        }
    }
    pairs
        .par_iter()
        .map(|(l, r)| {
            let a = evaluate_braid_word(l, seed)?;
            let b = evaluate_braid_word(r, seed)?;
            Ok(IdentityResult { identity: format!("{l} = {r}"), pass: a.vars() == b.vars() })
        })
        .collect()
}

/// Checks R_iR_{i+1}R_i = R_{i+1}R_iR_{i+1} and R_iR_j = R_jR_i (|i−j|>1)
/// on the seed of independent initial variables.
pub fn verify_braid_relations(n: usize, mode: Mode) -> Result<BraidRelationReport> {
    let b = build_braid_matrix(n)?;
    let results = match mode {
        Mode::X => check_relations(n, &ClusterSeed::initial(b))?,
        Mode::Y => check_relations(n, &YSeed::initial(b))?,
    };
    Ok(BraidRelationReport { strands: n, mode, results })
}
