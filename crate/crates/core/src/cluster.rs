//! Cluster seeds, exchange matrices, mutations and quivers.
//!
//! Public operations use 1-based indices; storage is 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::RatFunc;

/// Skew-symmetric integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::SizeMismatch("exchange matrix must be square".into()));
        }
        let entries: Vec<i64> = rows.iter().flatten().copied().collect();
        let m = ExchangeMatrix { size, entries };
        for i in 0..size {
            for j in 0..size {
                if m.at(i, j) != -m.at(j, i) {
                    return Err(Error::NotSkewSymmetric);
                }
            }
        }
        Ok(m)
    }

    pub fn zero(size: usize) -> Self {
        ExchangeMatrix { size, entries: vec![0; size * size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry b_{ij} with 0-based indices.
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    /// Entry b_{ij} with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.at(i - 1, j - 1)
    }

    /// Sets b_{ij} = v and b_{ji} = −v (0-based).
    pub fn set_pair(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.size + j] = v;
        self.entries[j * self.size + i] = -v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size.max(1)).take(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn check_index(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.size {
            Err(Error::IndexOutOfRange { index: k, size: self.size })
        } else {
            Ok(k - 1)
        }
    }

    /// Matrix mutation at 1-based `k`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let k = self.check_index(k)?;
        Ok(self.mutate0(k))
    }

    pub(crate) fn mutate0(&self, k: usize) -> Self {
        let n = self.size;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let v = if i == k || j == k {
                    -self.at(i, j)
                } else {
                    let bik = self.at(i, k);
                    let bkj = self.at(k, j);
                    self.at(i, j) + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
                out.entries[i * n + j] = v;
            }
        }
        out
    }

    /// Simultaneous swap of rows and columns (0-based).
    pub(crate) fn swap0(&self, i: usize, j: usize) -> Self {
        let n = self.size;
        let perm = |a: usize| if a == i { j } else if a == j { i } else { a };
        let mut out = self.clone();
        for a in 0..n {
            for b in 0..n {
                out.entries[a * n + b] = self.at(perm(a), perm(b));
            }
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.at(i, j) == -self.at(j, i)))
    }
}

/// Multidigraph with 1-based vertices; `arrows` holds (from, to, multiplicity).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize, u32)>,
}

pub fn quiver_from_matrix(b: &ExchangeMatrix) -> Quiver {
    let mut arrows = Vec::new();
    for i in 0..b.size() {
        for j in 0..b.size() {
            let v = b.at(i, j);
            if v > 0 {
                arrows.push((i + 1, j + 1, v as u32));
            }
        }
    }
    Quiver { vertices: b.size(), arrows }
}

/// Inverse of [`quiver_from_matrix`]; parallel arrows are summed, loops and
/// 2-cycles are rejected.
pub fn matrix_from_quiver(q: &Quiver) -> Result<ExchangeMatrix> {
    let mut m = ExchangeMatrix::zero(q.vertices);
    for &(a, b, mult) in &q.arrows {
        if a == 0 || a > q.vertices || b == 0 || b > q.vertices {
            return Err(Error::IndexOutOfRange { index: a.max(b), size: q.vertices });
        }
        if a == b {
            return Err(Error::InvalidInput(format!("loop at vertex {a}")));
        }
        let cur = m.at(a - 1, b - 1);
        if cur < 0 {
            return Err(Error::InvalidInput(format!("2-cycle between {a} and {b}")));
        }
        m.set_pair(a - 1, b - 1, cur + mult as i64);
    }
    Ok(m)
}

/// Common interface of x- and y-seeds.
pub trait Seed: Clone {
    fn vars(&self) -> &[RatFunc];
    fn matrix(&self) -> &ExchangeMatrix;
    fn with_parts(vars: Vec<RatFunc>, b: ExchangeMatrix) -> Self;
    /// Mutation at 0-based `k`.
    fn mutate0(&self, k: usize) -> Self;

    fn mutate(&self, k: usize) -> Result<Self> {
        let k = self.matrix().check_index(k)?;
        Ok(self.mutate0(k))
    }

    /// Transposition s_{i,j} (1-based): swaps variables and rows/columns.
    fn permute(&self, i: usize, j: usize) -> Result<Self> {
        let i0 = self.matrix().check_index(i)?;
        let j0 = self.matrix().check_index(j)?;
        if i0 == j0 {
            return Err(Error::InvalidInput("permutation needs distinct indices".into()));
        }
        let mut v = self.vars().to_vec();
        v.swap(i0, j0);
        Ok(Self::with_parts(v, self.matrix().swap0(i0, j0)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSeed {
    pub x: Vec<RatFunc>,
    pub b: ExchangeMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSeed {
    pub y: Vec<RatFunc>,
    pub b: ExchangeMatrix,
}

fn check_nonzero(vars: &[RatFunc], b: &ExchangeMatrix) -> Result<()> {
    if vars.len() != b.size() {
        return Err(Error::SizeMismatch(format!("{} variables for a {}x{} matrix", vars.len(), b.size(), b.size())));
    }
    if vars.iter().any(|v| v.is_zero()) {
        return Err(Error::InvalidInput("seed variables must be nonzero".into()));
    }
    Ok(())
}

impl ClusterSeed {
    pub fn new(x: Vec<RatFunc>, b: ExchangeMatrix) -> Result<Self> {
        check_nonzero(&x, &b)?;
        Ok(ClusterSeed { x, b })
    }

    /// The seed whose variables are the independent initial variables.
    pub fn initial(b: ExchangeMatrix) -> Self {
        let x = (0..b.size()).map(RatFunc::var).collect();
        ClusterSeed { x, b }
    }

    /// y_j = ∏_k x_k^{b_{kj}}.
    pub fn y_seed(&self) -> YSeed {
        let n = self.b.size();
        let y = (0..n)
            .map(|j| {
                let mut acc = RatFunc::one();
                for k in 0..n {
                    let e = self.b.at(k, j);
                    if e != 0 {
                        acc = acc.mul(&self.x[k].pow(e).expect("seed variables are nonzero"));
                    }
                }
                acc
            })
            .collect();
        YSeed { y, b: self.b.clone() }
    }
}

impl Seed for ClusterSeed {
    fn vars(&self) -> &[RatFunc] {
        &self.x
    }
    fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }
    fn with_parts(vars: Vec<RatFunc>, b: ExchangeMatrix) -> Self {
        ClusterSeed { x: vars, b }
    }

    fn mutate0(&self, k: usize) -> Self {
        let n = self.b.size();
        let mut pos = RatFunc::one();
        let mut neg = RatFunc::one();
        for j in 0..n {
            let e = self.b.at(j, k);
            if e > 0 {
                pos = pos.mul(&self.x[j].pow(e).unwrap());
            } else if e < 0 {
                neg = neg.mul(&self.x[j].pow(-e).unwrap());
            }
        }
        let mut x = self.x.clone();
        x[k] = pos.add(&neg).div(&self.x[k]).expect("seed variables are nonzero");
        ClusterSeed { x, b: self.b.mutate0(k) }
    }
}

impl YSeed {
    pub fn new(y: Vec<RatFunc>, b: ExchangeMatrix) -> Result<Self> {
        check_nonzero(&y, &b)?;
        Ok(YSeed { y, b })
    }

    pub fn initial(b: ExchangeMatrix) -> Self {
        let y = (0..b.size()).map(RatFunc::var).collect();
        YSeed { y, b }
    }
}

impl Seed for YSeed {
    fn vars(&self) -> &[RatFunc] {
        &self.y
    }
    fn matrix(&self) -> &ExchangeMatrix {
        &self.b
    }
    fn with_parts(vars: Vec<RatFunc>, b: ExchangeMatrix) -> Self {
        YSeed { y: vars, b }
    }

    fn mutate0(&self, k: usize) -> Self {
        let yk = &self.y[k];
        let yk_inv = yk.inv().expect("seed variables are nonzero");
        let one = RatFunc::one();
        let plus = one.add(yk);
        let plus_inv = one.add(&yk_inv);
        let y = (0..self.b.size())
            .map(|i| {
                if i == k {
                    return yk_inv.clone();
                }
                let e = self.b.at(k, i);
                if e == 0 {
                    self.y[i].clone()
                } else if e > 0 {
                    self.y[i].mul(&plus_inv.pow(-e).unwrap())
                } else {
                    self.y[i].mul(&plus.pow(-e).unwrap())
                }
            })
            .collect();
        YSeed { y, b: self.b.mutate0(k) }
    }
}

/// JSON form `{"size": n, "B": [[...]], "x": [...]}` (or `"y"` for y-seeds).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedJson {
    pub size: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
}

fn parse_vars(list: &[String]) -> Result<Vec<RatFunc>> {
    list.iter().map(|s| RatFunc::parse(s)).collect()
}

impl SeedJson {
    pub fn matrix(&self) -> Result<ExchangeMatrix> {
        let b = ExchangeMatrix::from_rows(&self.b)?;
        if b.size() != self.size {
            return Err(Error::SizeMismatch(format!("size {} but B is {}x{}", self.size, b.size(), b.size())));
        }
        Ok(b)
    }

    pub fn to_cluster_seed(&self) -> Result<ClusterSeed> {
        let x = self.x.as_ref().ok_or_else(|| Error::InvalidInput("missing \"x\"".into()))?;
        ClusterSeed::new(parse_vars(x)?, self.matrix()?)
    }

    pub fn to_y_seed(&self) -> Result<YSeed> {
        let y = self.y.as_ref().ok_or_else(|| Error::InvalidInput("missing \"y\"".into()))?;
        YSeed::new(parse_vars(y)?, self.matrix()?)
    }

    pub fn from_cluster_seed(s: &ClusterSeed) -> Self {
        SeedJson {
            size: s.b.size(),
            b: s.b.rows(),
            x: Some(s.x.iter().map(|v| v.to_string_with('x')).collect()),
            y: None,
        }
    }

    pub fn from_y_seed(s: &YSeed) -> Self {
        SeedJson {
            size: s.b.size(),
            b: s.b.rows(),
            x: None,
            y: Some(s.y.iter().map(|v| v.to_string_with('y')).collect()),
        }
    }
}
