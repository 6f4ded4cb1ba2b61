use rand::Rng;
use serde::Serialize;

use crate::braid::{build_braid_matrix, r_steps, strands_for_size, Step};
use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::RootField;

use super::chain::FactorChain;
use super::element::pairing;
use super::rep::{RepField, Representation};

/// Images Ỹ_i of the quantum mutation at k (1-based) in terms of the old
/// generators, and the mutated matrix.
pub fn quantum_mutate(b: &ExchangeMatrix, k: usize) -> Result<(Vec<FactorChain>, ExchangeMatrix)> {
    let k0 = b.check_index(k)?;
    let n = b.size();
    let yk_inv = FactorChain::generator_pow(n, k, -1);
    let yk = FactorChain::generator(n, k);
    let images = (0..n)
        .map(|i| {
            if i == k0 {
                return yk_inv.clone();
            }
            let bki = b.at(k0, i);
            let mut c = FactorChain::generator(n, i + 1);
            for m in 1..=bki.abs() {
                c = if bki > 0 {
                    c.mul(&FactorChain::binom(2 * m - 1, yk_inv.clone(), true))
                } else {
                    c.mul(&FactorChain::binom(2 * m - 1, yk.clone(), false))
                };
            }
            c
        })
        .collect();
    Ok((images, b.mutate(k)?))
}

fn check_braid(b: &ExchangeMatrix, i: usize) -> Result<usize> {
    let n = strands_for_size(b.size())?;
    if b != &build_braid_matrix(n)? {
        return Err(Error::InvalidInput("matrix is not the braid exchange matrix".into()));
    }
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n - 1 });
    }
    Ok(n)
}

/// The closed-form images of all generators under R^q at generator `i`;
/// only positions 3i−2..3i+4 change.
pub fn apply_rq(b: &ExchangeMatrix, i: usize) -> Result<Vec<FactorChain>> {
    check_braid(b, i)?;
    let size = b.size();
    let start = 3 * i - 3;
    let y = |l: usize| FactorChain::generator(size, start + l);
    let yinv = |l: usize| FactorChain::generator_pow(size, start + l, -1);
    let plus = |c: &FactorChain| FactorChain::binom(1, c.clone(), false);
    let plus_inv_of_inv = |c: &FactorChain| FactorChain::binom(1, c.inverse(), true);

    let y2p = y(2).mul(&plus(&y(4)));
    let y6p = y(6).mul(&plus(&y(4)));
    let y4pp = yinv(4).mul(&plus(&y2p)).mul(&plus(&y6p));
    let tail = plus_inv_of_inv(&y(4))
        .mul(&plus_inv_of_inv(&y2p))
        .mul(&plus_inv_of_inv(&y6p))
        .mul(&plus_inv_of_inv(&y4pp));
    let window = [
        y(1).mul(&plus(&y2p)),
        y(5).mul(&tail),
        y2p.inverse().mul(&plus(&y4pp)),
        y4pp.inverse(),
        y6p.inverse().mul(&plus(&y4pp)),
        y(3).mul(&tail),
        y(7).mul(&plus(&y6p)),
    ];
    let mut out: Vec<FactorChain> = (1..=size).map(|j| FactorChain::generator(size, j)).collect();
    for (l, c) in window.into_iter().enumerate() {
        out[start + l] = c;
    }
    Ok(out)
}

/// R^q at generator `i` as the literal composition of four quantum mutations
/// and three transpositions, expressed in the initial generators.
pub fn rq_by_mutations(b: &ExchangeMatrix, i: usize) -> Result<Vec<FactorChain>> {
    check_braid(b, i)?;
    let size = b.size();
    let mut cur: Vec<FactorChain> = (1..=size).map(|j| FactorChain::generator(size, j)).collect();
    let mut cur_b = b.clone();
    for step in r_steps(i) {
        match step {
            Step::Mutate(k) => {
                let (imgs, nb) = quantum_mutate(&cur_b, k)?;
                cur = imgs.iter().map(|c| c.substitute(&cur, &cur_b).simplify(b)).collect();
                cur_b = nb;
            }
            Step::Swap(x, y) => {
                cur.swap(x - 1, y - 1);
                cur_b = cur_b.swap0(x - 1, y - 1);
            }
        }
    }
    if &cur_b != b {
        return Err(Error::InvalidInput("exchange matrix not restored by the step word".into()));
    }
    Ok(cur)
}

/// Quantum mutation applied to generator matrices satisfying the relations of `b`.
pub fn mutate_matrices<T: RootField>(
    gens: &[Matrix<T>],
    b: &ExchangeMatrix,
    q: &T,
    k: usize,
) -> Result<(Vec<Matrix<T>>, ExchangeMatrix)> {
    let (imgs, nb) = quantum_mutate(b, k)?;
    let mats = imgs.iter().map(|c| c.eval_with(gens, b, q)).collect::<Result<_>>()?;
    Ok((mats, nb))
}

/// R^q at generator `i` applied to generator matrices of the braid torus.
pub fn apply_rq_matrices<T: RootField>(
    gens: &[Matrix<T>],
    b: &ExchangeMatrix,
    q: &T,
    i: usize,
) -> Result<Vec<Matrix<T>>> {
    let start = 3 * i - 3;
    let chains = apply_rq(b, i)?;
    let mut out = gens.to_vec();
    for l in 0..7 {
        out[start + l] = chains[start + l].eval_with(gens, b, q)?;
    }
    Ok(out)
}

pub(crate) fn deviation<T: RootField>(a: &Matrix<T>, b: &Matrix<T>) -> f64 {
    if T::EXACT {
        if a == b {
            0.0
        } else {
            a.rel_dist(b).max(f64::MIN_POSITIVE)
        }
    } else {
        a.rel_dist(b)
    }
}

pub(crate) fn within<T: RootField>(dev: f64, tol: f64) -> bool {
    if T::EXACT {
        dev == 0.0
    } else {
        dev <= tol
    }
}

pub(crate) const MAX_RETRIES: usize = 5;

/// Builds a random representation and runs `f`, re-drawing κ when a binomial
/// evaluates to a singular matrix.
fn with_rep<T: RepField, R: Rng, X>(
    b: &ExchangeMatrix,
    order: u32,
    rng: &mut R,
    f: impl Fn(&Representation<T>) -> Result<X>,
) -> Result<(X, usize)> {
    let mut last = None;
    for attempt in 0..=MAX_RETRIES {
        let rep = Representation::<T>::random(b, order, rng)?;
        match f(&rep) {
            Ok(x) => return Ok((x, attempt)),
            Err(Error::Singular(m)) => last = Some(m),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Singular(format!("singular after {MAX_RETRIES} retries: {}", last.unwrap_or_default())))
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryDeviation {
    pub generator: usize,
    pub entry: usize,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RqReport {
    pub strands: usize,
    pub order: u32,
    pub exact: bool,
    pub retries: usize,
    pub entries: Vec<EntryDeviation>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares the closed form of R^q with the mutation composition in a random
/// representation with q = e^{πi/N}.
pub fn verify_rq_equals_mutations<T: RepField, R: Rng>(n: usize, order: u32, rng: &mut R) -> Result<RqReport> {
    let b = build_braid_matrix(n)?;
    let pairs: Vec<(Vec<FactorChain>, Vec<FactorChain>)> =
        (1..n).map(|i| Ok((apply_rq(&b, i)?, rq_by_mutations(&b, i)?))).collect::<Result<_>>()?;
    let (entries, retries) = with_rep::<T, _, _>(&b, order, rng, |rep| {
        let mut out = Vec::new();
        for (i, (closed, muts)) in pairs.iter().enumerate() {
            let start = 3 * i;
            for l in 0..7 {
                let a = closed[start + l].eval(rep)?;
                let c = muts[start + l].eval(rep)?;
                out.push(EntryDeviation { generator: i + 1, entry: l + 1, deviation: deviation(&a, &c) });
            }
        }
        Ok(out)
    })?;
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
    Ok(RqReport {
        strands: n,
        order,
        exact: T::EXACT,
        retries,
        pass: within::<T>(max_deviation, 1e-9),
        entries,
        max_deviation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeReport {
    pub k: usize,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Checks μ^q_k = μ♯_k∘μ′_k in a representation: μ′ is the monomial map and
/// μ♯ = Ad Φ(ŷ_k) sends a monomial Y^a to ∏_{m=1}^{γ}(1+q^{2m−1}Y_k)^{-1}Y^a
/// (γ > 0) or ∏_{m=1}^{−γ}(1+q^{1−2m}Y_k)Y^a (γ < 0), γ = Σ_j a_j b_{kj}.
pub fn mu_decompose_check<T: RootField>(b: &ExchangeMatrix, k: usize, rep: &Representation<T>) -> Result<DecomposeReport> {
    let k0 = b.check_index(k)?;
    if rep.matrix() != b {
        return Err(Error::InvalidInput("representation belongs to another matrix".into()));
    }
    let n = b.size();
    let q = rep.q().clone();
    let gens = rep.generators();
    let (imgs, _) = quantum_mutate(b, k)?;
    let dim = rep.dim();
    let yk = &gens[k0];
    let mut deviations = Vec::with_capacity(n);
    for i in 0..n {
        let bki = b.at(k0, i);
        let mut a = vec![0i64; n];
        let prime = if i == k0 {
            a[k0] = -1;
            yk.inverse()?
        } else if bki >= 0 {
            a[i] = 1;
            a[k0] += bki;
            (&gens[i] * &yk.pow(bki)?).scale(&q.powi(b.at(i, k0) * bki).unwrap())
        } else {
            a[i] = 1;
            gens[i].clone()
        };
        let gamma: i64 = (0..n).map(|j| a[j] * b.at(k0, j)).sum();
        let mut sharp = Matrix::identity(dim);
        for m in 1..=gamma.abs() {
            let e = if gamma > 0 { 2 * m - 1 } else { 1 - 2 * m };
            let f = &Matrix::identity(dim) + &yk.scale(&q.powi(e).unwrap());
            sharp = &sharp * &(if gamma > 0 { f.inverse()? } else { f });
        }
        let composed = &sharp * &prime;
        deviations.push(deviation(&composed, &imgs[i].eval(rep)?));
    }
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(DecomposeReport { k, pass: within::<T>(max_deviation, 1e-10), deviations, max_deviation })
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralElement {
    pub name: String,
    pub exponents: Vec<i64>,
    pub central: bool,
    pub rep_deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralReport {
    pub elements: Vec<CentralElement>,
    pub pass: bool,
}

/// Y^a is central iff ⟨a, e_j⟩ = 0 for every basis vector e_j.
pub fn is_central_exponent(b: &ExchangeMatrix, a: &[i64]) -> bool {
    (0..b.size()).all(|j| {
        let mut e = vec![0; b.size()];
        e[j] = 1;
        pairing(b, a, &e) == 0
    })
}

/// Checks that Y_{3i−1}Y_{3i} and Y_1Y_4⋯Y_{3n+1} are central, by exponent
/// arithmetic and, given a representation, by commuting matrices.
pub fn central_elements_check<T: RootField>(n: usize, rep: Option<&Representation<T>>) -> Result<CentralReport> {
    let b = build_braid_matrix(n)?;
    let size = b.size();
    let mut cands: Vec<(String, Vec<i64>)> = (1..=n)
        .map(|i| {
            let mut e = vec![0; size];
            e[3 * i - 2] = 1;
            e[3 * i - 1] = 1;
            (format!("Y{}Y{}", 3 * i - 1, 3 * i), e)
        })
        .collect();
    let mut e = vec![0; size];
    let mut name = String::new();
    for j in (0..size).step_by(3) {
        e[j] = 1;
        name.push_str(&format!("Y{}", j + 1));
    }
    cands.push((name, e));
    let mut elements = Vec::new();
    for (name, a) in cands {
        let central = is_central_exponent(&b, &a);
        let rep_deviation = match rep {
            Some(r) => {
                let m = r.monomial(&a);
                let mut worst: f64 = 0.0;
                for g in r.generators() {
                    worst = worst.max(deviation(&(&m * g), &(g * &m)));
                }
                Some(worst)
            }
            None => None,
        };
        elements.push(CentralElement { name, exponents: a, central, rep_deviation });
    }
    let pass = elements.iter().all(|e| e.central && e.rep_deviation.is_none_or(|d| within::<T>(d, 1e-12)));
    Ok(CentralReport { elements, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumBraidReport {
    pub strands: usize,
    pub order: u32,
    pub identities: Vec<(String, f64, bool)>,
    pub pass: bool,
}

/// Braid relations of R^q acting on generator matrices of a random representation.
pub fn quantum_braid_check<T: RepField, R: Rng>(n: usize, order: u32, rng: &mut R) -> Result<QuantumBraidReport> {
    let b = build_braid_matrix(n)?;
    let mut words: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 1..n.saturating_sub(1) {
        words.push((vec![i, i + 1, i], vec![i + 1, i, i + 1]));
    }
    for i in 1..n {
        for j in i + 2..n {
            words.push((vec![i, j], vec![j, i]));
        }
    }
    let (identities, _) = with_rep::<T, _, _>(&b, order, rng, |rep| {
        let run = |w: &[usize]| -> Result<Vec<Matrix<T>>> {
            let mut g = rep.generators().to_vec();
            for &i in w {
                g = apply_rq_matrices(&g, &b, rep.q(), i)?;
            }
            Ok(g)
        };
        let mut out = Vec::new();
        for (l, r) in &words {
            let x = run(l)?;
            let y = run(r)?;
            let dev = x.iter().zip(&y).map(|(a, c)| deviation(a, c)).fold(0.0, f64::max);
            let name = |w: &[usize]| w.iter().map(|i| format!("R{i}")).collect::<Vec<_>>().join(" ");
            out.push((format!("{} = {}", name(l), name(r)), dev, within::<T>(dev, 1e-9)));
        }
        Ok(out)
    })?;
    let pass = identities.iter().all(|x| x.2);
    Ok(QuantumBraidReport { strands: n, order, identities, pass })
}
