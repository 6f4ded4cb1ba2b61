use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Real, RootField};

use super::functions::{d_fn, delta_fn, lambda_fn, ratio_pow, re, unit, w_multival};

/// [n] = n mod N in 0..N.
pub fn bracket(n: i64, big_n: u32) -> usize {
    n.rem_euclid(big_n as i64) as usize
}

/// Z = diag(ω^0, …, ω^{N−1}) and the cyclic shift (X)_{j,k} = δ_{j,k−1}.
pub fn clock_shift<T: RootField>(n: u32) -> Result<(Matrix<T>, Matrix<T>)> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let dim = n as usize;
    let z = Matrix::diagonal((0..n as i64).map(|j| T::root_of_unity(n, j)).collect());
    let x = Matrix::from_fn(dim, dim, |j, k| if (j + 1) % dim == k { T::one() } else { T::zero() });
    Ok((z, x))
}

/// Couplings κ₂, κ₄, κ₆ of the N²-dimensional representation, all of modulus below 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaParams<F> {
    pub k2: Complex<F>,
    pub k4: Complex<F>,
    pub k6: Complex<F>,
}

impl<F: Real> KappaParams<F> {
    pub fn new(k2: Complex<F>, k4: Complex<F>, k6: Complex<F>) -> Result<Self> {
        for (name, k) in [("κ2", k2), ("κ4", k4), ("κ6", k6)] {
            if !(k.norm() < F::one()) {
                return Err(Error::InvalidInput(format!("|{name}| must be below 1")));
            }
        }
        Ok(KappaParams { k2, k4, k6 })
    }

    /// κ₄ = 1 − δ^N with real κ₂, κ₆.
    pub fn from_delta(n: u32, k2: F, k6: F, delta: F) -> Result<Self> {
        if !(delta > F::zero()) {
            return Err(Error::InvalidInput("δ must be positive".into()));
        }
        let zero = F::zero();
        Self::new(Complex::new(k2, zero), Complex::new(F::one() - delta.powi(n as i32), zero), Complex::new(k6, zero))
    }

    /// κ₂′ = κ₂Δ(κ₄^{−1}).
    pub fn k2p(&self, n: u32) -> Complex<F> {
        self.k2 * delta_fn(self.k4.inv(), n)
    }

    /// κ₆′ = κ₆Δ(κ₄^{−1}).
    pub fn k6p(&self, n: u32) -> Complex<F> {
        self.k6 * delta_fn(self.k4.inv(), n)
    }
}

/// Y₂ = ω^{1/2}κ₂ X⊗1, Y₄ = ω^{1/2}κ₄ Z⊗Z^{−1}, Y₆ = ω^{1/2}κ₆ 1⊗X^{−1}.
#[derive(Clone, Debug)]
pub struct YRep<F> {
    pub n: u32,
    pub y2: Matrix<Complex<F>>,
    pub y4: Matrix<Complex<F>>,
    pub y6: Matrix<Complex<F>>,
}

/// Exchange-matrix entries b_{42}, b_{64}, b_{62} among Y₂, Y₄, Y₆.
const B42: i64 = -1;
const B64: i64 = 1;
const B62: i64 = 0;

pub fn build_y_rep<F: Real>(n: u32, kappa: &KappaParams<F>) -> Result<YRep<F>> {
    let (z, x) = clock_shift::<Complex<F>>(n)?;
    let one = Matrix::identity(n as usize);
    let half = <Complex<F> as RootField>::root_of_unity(2 * n, 1);
    let rep = YRep {
        n,
        y2: x.kron(&one).scale(&(half * kappa.k2)),
        y4: z.kron(&z.inverse()?).scale(&(half * kappa.k4)),
        y6: one.kron(&x.inverse()?).scale(&(half * kappa.k6)),
    };
    rep.check_relations()?;
    Ok(rep)
}

impl<F: Real> YRep<F> {
    /// Largest deviation from Y_kY_j = ζ^{b_{jk}}Y_jY_k over the three pairs.
    pub fn relation_deviation(&self) -> f64 {
        let zeta = |e: i64| <Complex<F> as RootField>::root_of_unity(self.n, -e);
        let pairs = [(&self.y2, &self.y4, B42), (&self.y4, &self.y6, B64), (&self.y2, &self.y6, B62)];
        pairs
            .iter()
            .map(|(yk, yj, b)| (&(*yk * *yj)).rel_dist(&(&(*yj * *yk)).scale(&zeta(*b))))
            .fold(0.0, f64::max)
    }

    fn check_relations(&self) -> Result<()> {
        let dev = self.relation_deviation();
        if dev > 1e-12 {
            return Err(Error::RelationFailure(format!("Y relations violated by {dev:e}")));
        }
        Ok(())
    }
}

/// θ^{ij}_{kℓ} = 1 iff [i−j] + [j−ℓ] + [ℓ−k−1] + [k−i] = N − 1.
pub fn theta_indicator(i: i64, j: i64, k: i64, l: i64, n: u32) -> bool {
    bracket(i - j, n) + bracket(j - l, n) + bracket(l - k - 1, n) + bracket(k - i, n) == n as usize - 1
}

/// Whether the ω^{[ℓ−k]} factor picked up when Δ(ω^{−1}κ₄^{−1}) crosses
/// the branch cut is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchPolicy {
    Principal,
    Monodromy,
}

fn index4(n: u32) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    let n = n as usize;
    (0..n.pow(4)).map(move |e| (e / (n * n * n), (e / (n * n)) % n, (e / n) % n, e % n))
}

fn monodromy<F: Real>(policy: BranchPolicy, k: usize, l: usize, n: u32) -> Complex<F> {
    match policy {
        BranchPolicy::Principal => Complex::new(F::one(), F::zero()),
        BranchPolicy::Monodromy => unit(n, bracket(l as i64 - k as i64, n) as i64),
    }
}

/// R_{ij,kℓ} from four d-factors: 1/d(X₀ω^{i−j}) · B(i,k) · C(j,ℓ) · 1/d(ω^{ℓ−k−1}/κ₄) with
/// X₀ = κ₄Δ(κ₂′)Δ(κ₆′), B and C the discrete Fourier transforms of 1/d(κ₂′ω^s), 1/d(κ₆′ω^{−s}).
pub fn build_r_matrix<F: Real>(n: u32, kappa: &KappaParams<F>, policy: BranchPolicy) -> Result<Matrix<Complex<F>>> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let dim = n as usize;
    let nf: F = re(n as f64);
    let (k2p, k6p) = (kappa.k2p(n), kappa.k6p(n));
    let x0 = kappa.k4 * delta_fn(k2p, n) * delta_fn(k6p, n);
    let w = |e: i64| unit::<F>(n, e);
    let inv_d = |x| d_fn(x, n).map(|v| v.inv());
    let a: Vec<_> = (0..n as i64).map(|m| inv_d(x0 * w(m))).collect::<Result<_>>()?;
    let dd: Vec<_> = (0..n as i64).map(|m| inv_d(w(m - 1) / kappa.k4)).collect::<Result<_>>()?;
    let b2: Vec<_> = (0..n as i64).map(|s| inv_d(k2p * w(s))).collect::<Result<_>>()?;
    let b6: Vec<_> = (0..n as i64).map(|s| inv_d(k6p * w(-s))).collect::<Result<_>>()?;
    let dft = |v: &[Complex<F>], m: i64| v.iter().enumerate().fold(Complex::new(F::zero(), F::zero()), |acc, (s, x)| acc + *x * w(s as i64 * m)) / nf;
    let bm: Vec<_> = (0..n as i64).map(|m| dft(&b2, m)).collect();
    let cm: Vec<_> = (0..n as i64).map(|m| dft(&b6, m)).collect();
    let mut r = Matrix::zeros(dim * dim, dim * dim);
    for (i, j, k, l) in index4(n) {
        let (i_, j_, k_, l_) = (i as i64, j as i64, k as i64, l as i64);
        let v = a[bracket(i_ - j_, n)] * bm[bracket(i_ - k_, n)] * cm[bracket(j_ - l_, n)] * dd[bracket(l_ - k_, n)];
        r.set(i * dim + j, k * dim + l, v * monodromy(policy, k, l, n));
    }
    Ok(r)
}

/// The same matrix written with w(x,n) = w(x,Δ(x)|n) and λ:
/// pre · w(X₀,i−j) w(1/(ωκ₄),ℓ−k) / (w(Δ(κ₂′),i−k−1) w(Δ(κ₆′),ℓ−j−1)),
/// pre = ∏_{a=2,6} (κ_a′/Δ(κ_a′))^{(N−1)/2}/λ(Δ(κ_a′), κ_a′).
pub fn build_r_matrix_w<F: Real>(n: u32, kappa: &KappaParams<F>, policy: BranchPolicy) -> Result<Matrix<Complex<F>>> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let dim = n as usize;
    let half = (re::<F>(n as f64) - F::one()) / re(2.0);
    let (k2p, k6p) = (kappa.k2p(n), kappa.k6p(n));
    let (d2, d6) = (delta_fn(k2p, n), delta_fn(k6p, n));
    let x0 = kappa.k4 * d2 * d6;
    let pre = ratio_pow(k2p, d2, half) / lambda_fn(d2, k2p, n)? * ratio_pow(k6p, d6, half) / lambda_fn(d6, k6p, n)?;
    let table = |x: Complex<F>| (0..n as i64).map(|m| w_multival(x, m, n)).collect::<Result<Vec<_>>>();
    let wa = table(x0)?;
    let wd = table((unit::<F>(n, 1) * kappa.k4).inv())?;
    let w2 = table(d2)?;
    let w6 = table(d6)?;
    let mut r = Matrix::zeros(dim * dim, dim * dim);
    for (i, j, k, l) in index4(n) {
        let (i_, j_, k_, l_) = (i as i64, j as i64, k as i64, l as i64);
        let v = pre * wa[bracket(i_ - j_, n)] * wd[bracket(l_ - k_, n)]
            / (w2[bracket(i_ - k_ - 1, n)] * w6[bracket(l_ - j_ - 1, n)]);
        r.set(i * dim + j, k * dim + l, v * monodromy(policy, k, l, n));
    }
    Ok(r)
}

/// (a)_n = ∏_{k=1}^n (1 − a^k) for a root of unity a.
fn pochhammer<T: RootField>(a: &T, n: usize) -> T {
    let mut r = T::one();
    let mut p = T::one();
    for _ in 0..n {
        p = p * a.clone();
        r = r * (T::one() - p.clone());
    }
    r
}

/// R^K with numerator N ω^{s(−1+i−k)}; s = 1 is the standard matrix, s = −1 a
/// deliberately wrong phase used as a negative control.
pub fn build_rk_with_phase<T: RootField>(n: u32, s: i64) -> Result<Matrix<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let dim = n as usize;
    let w = T::root_of_unity(n, 1);
    let wbar = w.conj();
    let poch: Vec<T> = (0..dim).map(|m| pochhammer(&w, m)).collect();
    let pochbar: Vec<T> = (0..dim).map(|m| pochhammer(&wbar, m)).collect();
    let big = T::from_i64(n as i64);
    let mut r = Matrix::zeros(dim * dim, dim * dim);
    for (i, j, k, l) in index4(n) {
        let (i_, j_, k_, l_) = (i as i64, j as i64, k as i64, l as i64);
        if !theta_indicator(i_, j_, k_, l_, n) {
            continue;
        }
        let den = poch[bracket(i_ - j_, n)].clone()
            * pochbar[bracket(j_ - l_, n)].clone()
            * poch[bracket(l_ - k_ - 1, n)].clone()
            * pochbar[bracket(k_ - i_, n)].clone();
        let den = den.try_inv().ok_or_else(|| Error::Singular("vanishing Pochhammer".into()))?;
        r.set(i * dim + j, k * dim + l, big.clone() * T::root_of_unity(n, s * (-1 + i_ - k_)) * den);
    }
    Ok(r)
}

/// R^K_{ij,kℓ} = N ω^{−1+i−k} θ^{ij}_{kℓ} / ((ω)_{[i−j]} (ω̄)_{[j−ℓ]} (ω)_{[ℓ−k−1]} (ω̄)_{[k−i]}).
pub fn build_rk<T: RootField>(n: u32) -> Result<Matrix<T>> {
    build_rk_with_phase(n, 1)
}

/// Largest distance of (ω)_{[m]}·(ω̄)_{[−m−1]} from N over 0 ≤ m < N; exactly
/// zero in exact arithmetic.
pub fn pochhammer_identity_deviation<T: RootField>(n: u32) -> f64 {
    let w = T::root_of_unity(n, 1);
    let wbar = w.conj();
    let big = T::from_i64(n as i64);
    (0..n as i64)
        .map(|m| (pochhammer(&w, bracket(m, n)) * pochhammer(&wbar, bracket(-m - 1, n))).dist(&big))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidMatrixReport {
    pub n: u32,
    pub exact: bool,
    /// max |LHS − RHS| / max(1, max|LHS|); zero when exactly equal.
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares (R⊗1)(1⊗R)(R⊗1) with (1⊗R)(R⊗1)(1⊗R) on V^{⊗3}.
pub fn verify_braid_matrix<T: Field>(r: &Matrix<T>, n: u32, tolerance: f64) -> Result<BraidMatrixReport> {
    if n > 16 {
        return Err(Error::InvalidInput(format!("N = {n} exceeds the memory guard of 16")));
    }
    let dim = n as usize;
    if r.rows() != dim * dim || !r.is_square() {
        return Err(Error::SizeMismatch(format!("expected {0}x{0}, got {1}x{2}", dim * dim, r.rows(), r.cols())));
    }
    let one = Matrix::<T>::identity(dim);
    let a = r.kron(&one);
    let b = one.kron(r);
    let (lhs, rhs) = rayon::join(
        || a.try_mul(&b).and_then(|m| m.try_mul(&a)),
        || b.try_mul(&a).and_then(|m| m.try_mul(&b)),
    );
    let (lhs, rhs) = (lhs?, rhs?);
    let equal = lhs == rhs;
    let deviation = if T::EXACT && equal { 0.0 } else { lhs.rel_dist(&rhs) };
    let pass = if T::EXACT { equal } else { deviation <= tolerance };
    Ok(BraidMatrixReport { n, exact: T::EXACT, deviation, tolerance, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeReport {
    pub n: u32,
    /// ρ in R = (ρ/N)ω^{ℓ−i+1}R^K, fitted on the first θ = 1 entry.
    pub rho: [f64; 2],
    /// Largest |R/((ρ/N)ω^{ℓ−i+1}R^K) − 1| over θ = 1 entries.
    pub deviation: f64,
    /// Largest |R| off the θ-support relative to the largest |R| on it.
    pub off_support: f64,
}

/// Fits ρ under R_{ij,kℓ} = (ρ/N)·ω^{ℓ−i+1}·R^K_{ij,kℓ} and measures the residual.
pub fn gauge_compare<F: Real>(r: &Matrix<Complex<F>>, rk: &Matrix<Complex<F>>, n: u32) -> Result<GaugeReport> {
    let dim = n as usize;
    if r.rows() != dim * dim || rk.rows() != dim * dim || !r.is_square() || !rk.is_square() {
        return Err(Error::SizeMismatch("gauge_compare needs two N²×N² matrices".into()));
    }
    let nf: F = re(n as f64);
    let mut ratios = Vec::new();
    let (mut on, mut off) = (0.0f64, 0.0f64);
    for (i, j, k, l) in index4(n) {
        let (row, col) = (i * dim + j, k * dim + l);
        let v = *r.get(row, col);
        if theta_indicator(i as i64, j as i64, k as i64, l as i64, n) {
            on = on.max(v.magnitude());
            let g = unit::<F>(n, l as i64 - i as i64 + 1) * *rk.get(row, col) / nf;
            if g.norm() > F::zero() && v.norm() > F::zero() {
                ratios.push(v / g);
            }
        } else {
            off = off.max(v.magnitude());
        }
    }
    let rho = *ratios.first().ok_or_else(|| Error::InvalidInput("no common nonzero entry".into()))?;
    let deviation = ratios.iter().map(|x| (*x / rho - F::one()).magnitude()).fold(0.0, f64::max);
    let rho = rho.to_c64();
    Ok(GaugeReport { n, rho: [rho.re, rho.im], deviation, off_support: if on > 0.0 { off / on } else { f64::INFINITY } })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaPoint {
    pub delta: f64,
    /// Set when δ^N was below the resolution of 1 − δ^N and had to be raised.
    pub floored: bool,
    pub deviation: f64,
    pub off_support: f64,
    /// Deviation with the branch factor ω^{[ℓ−k]} removed.
    pub deviation_without_branch_factor: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaLimitReport {
    pub n: u32,
    pub k2: f64,
    pub k6: f64,
    pub points: Vec<DeltaPoint>,
    pub deviation_decreasing: bool,
    /// Least-squares slope of log(deviation) against log(δ).
    pub deviation_exponent: f64,
    pub final_deviation: f64,
    pub support_decreasing: bool,
    pub support_exponent: f64,
    /// Removing the branch factor makes the comparison worse at every δ.
    pub branch_factor_needed: bool,
    /// Deviation strictly decreasing, positive exponent and ≤ 1e-2 at the smallest δ.
    pub pass_deviation: bool,
    /// Off-support entries strictly decreasing with a positive exponent.
    pub pass_support: bool,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Builds R with κ₄ = 1 − δ^N along the δ sequence and compares each with R^K.
pub fn delta_limit_study(n: u32, deltas: &[f64], k2: f64, k6: f64) -> Result<DeltaLimitReport> {
    if !(k2 > 0.0 && k2 < 1.0 && k6 > 0.0 && k6 < 1.0) {
        return Err(Error::InvalidInput("κ2 and κ6 must lie in (0, 1)".into()));
    }
    if deltas.is_empty() || deltas.iter().any(|&d| d <= 0.0) || !strictly_decreasing(deltas) {
        return Err(Error::InvalidInput("δ must be positive and strictly decreasing".into()));
    }
    let rk = build_rk::<Complex<f64>>(n)?;
    let floor = (1e-12f64).powf(1.0 / n as f64);
    let points = deltas
        .par_iter()
        .map(|&d| {
            let floored = d < floor;
            let delta = d.max(floor);
            let kappa = KappaParams::from_delta(n, k2, k6, delta)?;
            let with = gauge_compare(&build_r_matrix(n, &kappa, BranchPolicy::Monodromy)?, &rk, n)?;
            let without = gauge_compare(&build_r_matrix(n, &kappa, BranchPolicy::Principal)?, &rk, n)?;
            Ok(DeltaPoint {
                delta,
                floored,
                deviation: with.deviation,
                off_support: with.off_support,
                deviation_without_branch_factor: without.deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let logd: Vec<f64> = points.iter().map(|p| p.delta.ln()).collect();
    let dev: Vec<f64> = points.iter().map(|p| p.deviation).collect();
    let off: Vec<f64> = points.iter().map(|p| p.off_support).collect();
    let log_or_floor = |v: &[f64]| v.iter().map(|x| x.max(1e-300).ln()).collect::<Vec<_>>();
    let deviation_exponent = slope(&logd, &log_or_floor(&dev));
    let support_exponent = slope(&logd, &log_or_floor(&off));
    let final_deviation = *dev.last().unwrap();
    let deviation_decreasing = strictly_decreasing(&dev);
    let support_decreasing = strictly_decreasing(&off) || off.iter().all(|&x| x == 0.0);
    let trivial = n == 1;
    Ok(DeltaLimitReport {
        n,
        k2,
        k6,
        deviation_decreasing,
        deviation_exponent,
        final_deviation,
        support_decreasing,
        support_exponent,
        branch_factor_needed: trivial || points.iter().all(|p| p.deviation_without_branch_factor > p.deviation),
        pass_deviation: trivial
            || (deviation_decreasing && deviation_exponent > 0.0 && final_deviation <= 1e-2),
        pass_support: trivial || (support_decreasing && support_exponent > 0.0),
        points,
    })
}

/// Maps a matrix to nested `[re, im]` pairs, row-major.
pub fn matrix_pairs<T: RootField>(m: &Matrix<T>) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j).to_c64();
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}
