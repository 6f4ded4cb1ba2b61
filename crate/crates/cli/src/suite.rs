//! The all-checks runner behind `checkall`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use qbraid::analytic::{
    classical_limit_check, five_term_gap, fourier_transform_check, grid, inversion_check, octahedron_volume,
    shift_check, DilogParams,
};
use qbraid::braid::{apply_r, apply_r_by_mutations, build_braid_matrix, verify_braid_relations, Mode};
use qbraid::opcalc::{replay_braid_proof, verify_adjoint};
use qbraid::qtorus::verify_rq_equals_mutations;
use qbraid::rootunity::{
    build_r_matrix, build_r_matrix_w, delta_fn, build_rk_with_phase, delta_limit_study, fourier_w_check,
    limit_qy_check, pochhammer_identity_deviation, verify_braid_matrix, BranchPolicy, KappaParams, QyForm,
};
use qbraid::{ClusterSeed, Cyclotomic, Matrix, RootField, YSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub id: String,
    /// The identity being checked, in formula form.
    pub anchor: String,
    pub status: Status,
    pub metric: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub level: Level,
    pub seed: u64,
    pub status: Status,
    pub entries: Vec<CheckEntry>,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub level: Level,
    pub seed: u64,
    /// Record wall-clock times (makes the report non-reproducible).
    pub timings: bool,
    /// Flip the sign of the ω-phase in R^K; a negative control for the suite itself.
    pub corrupt_omega: bool,
}

impl SuiteOptions {
    pub fn new(level: Level, seed: u64) -> Self {
        SuiteOptions { level, seed, timings: false, corrupt_omega: false }
    }
}

/// Outcome of a single check before it is stamped with id and anchor.
struct Outcome {
    metric: f64,
    tolerance: f64,
    pass: bool,
    detail: Option<String>,
}

impl Outcome {
    fn within(metric: f64, tolerance: f64) -> Self {
        Outcome { metric, tolerance, pass: metric.is_finite() && metric <= tolerance, detail: None }
    }

    fn boolean(pass: bool) -> Self {
        Outcome { metric: if pass { 0.0 } else { 1.0 }, tolerance: 0.0, pass, detail: None }
    }

    fn with(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

type CheckFn = Box<dyn Fn(&mut ChaCha8Rng) -> qbraid::Result<Outcome> + Send + Sync>;

struct Check {
    id: &'static str,
    anchor: &'static str,
    run: CheckFn,
}

fn check(
    id: &'static str,
    anchor: &'static str,
    run: impl Fn(&mut ChaCha8Rng) -> qbraid::Result<Outcome> + Send + Sync + 'static,
) -> Check {
    Check { id, anchor, run: Box::new(run) }
}

fn classical_checks(level: Level) -> Vec<Check> {
    let mut v = vec![
        check("classical.braid.x.n3", "R1 R2 R1 = R2 R1 R2 on x-seeds", |_| {
            Ok(Outcome::boolean(verify_braid_relations(3, Mode::X)?.pass()))
        }),
        check("classical.braid.y.n3", "R1 R2 R1 = R2 R1 R2 on y-seeds", |_| {
            Ok(Outcome::boolean(verify_braid_relations(3, Mode::Y)?.pass()))
        }),
        check("classical.window.n3", "windowed closed form of R_i = mutation/permutation word", |_| {
            let b = build_braid_matrix(3)?;
            let x = ClusterSeed::initial(b.clone());
            let y = YSeed::initial(b);
            let mut ok = true;
            for i in 1..3 {
                ok &= apply_r(&x, i)? == apply_r_by_mutations(&x, i)?;
                ok &= apply_r(&y, i)? == apply_r_by_mutations(&y, i)?;
            }
            Ok(Outcome::boolean(ok))
        }),
    ];
    if level == Level::Full {
        v.push(check("classical.braid.y.n4", "braid and far-commutation relations on y-seeds, 4 strands", |_| {
            Ok(Outcome::boolean(verify_braid_relations(4, Mode::Y)?.pass()))
        }));
        v.push(check("classical.braid.x.n4", "braid and far-commutation relations on x-seeds, 4 strands", |_| {
            Ok(Outcome::boolean(verify_braid_relations(4, Mode::X)?.pass()))
        }));
    }
    v
}

fn quantum_checks(level: Level) -> Vec<Check> {
    let mut v = vec![
        check("qtorus.rq.cyclotomic.n3", "closed form of R^q = quantum mutation word, exact at N=3", |rng| {
            let r = verify_rq_equals_mutations::<Cyclotomic, _>(2, 3, rng)?;
            Ok(Outcome::boolean(r.pass))
        }),
        check("opcalc.braid_proof", "R1 R2 R1 = R2 R1 R2 as a replayed rewrite derivation", |_| {
            let r = replay_braid_proof()?;
            let o = Outcome::boolean(r.pass);
            Ok(match r.failure.or(r.residual) {
                Some(msg) => o.with(msg),
                None => o.with(format!("{} steps, {} checkpoints", r.steps.len(), r.checkpoints)),
            })
        }),
        check("opcalc.adjoint.1", "R Y_j R^{-1} = R^q(Y_j) on the first window", |rng| {
            let r = verify_adjoint(1, rng)?;
            let dev = r.cases.iter().flat_map(|c| c.checks.iter().map(|d| d.deviation)).fold(0.0, f64::max);
            Ok(Outcome { metric: dev, tolerance: 1e-9, pass: r.pass, detail: None })
        }),
    ];
    if level == Level::Full {
        v.push(check("qtorus.rq.complex.n5", "closed form of R^q = quantum mutation word at N=5", |rng| {
            let r = verify_rq_equals_mutations::<Complex64, _>(3, 5, rng)?;
            Ok(Outcome { metric: r.max_deviation, tolerance: 1e-9, pass: r.pass, detail: None })
        }));
        v.push(check("opcalc.adjoint.2", "R Y_j R^{-1} = R^q(Y_j) on the second window", |rng| {
            let r = verify_adjoint(2, rng)?;
            let dev = r.cases.iter().flat_map(|c| c.checks.iter().map(|d| d.deviation)).fold(0.0, f64::max);
            Ok(Outcome { metric: dev, tolerance: 1e-9, pass: r.pass, detail: None })
        }));
    }
    v
}

fn rk<T: RootField>(n: u32, corrupt: bool) -> qbraid::Result<Matrix<T>> {
    build_rk_with_phase(n, if corrupt { -1 } else { 1 })
}

fn root_checks(level: Level, corrupt: bool) -> Vec<Check> {
    let max_exact = if level == Level::Fast { 3 } else { 6 };
    let max_float = if level == Level::Fast { 3 } else { 8 };
    let max_w = if level == Level::Fast { 5 } else { 12 };
    let samples = if level == Level::Fast { 20 } else { 100 };
    let mut v = vec![
        check("rk.braid.cyclotomic", "(R⊗1)(1⊗R)(R⊗1) = (1⊗R)(R⊗1)(1⊗R) for R^K, exact", move |_| {
            let mut failed = Vec::new();
            for n in 2..=max_exact {
                if !verify_braid_matrix(&rk::<Cyclotomic>(n, corrupt)?, n, 0.0)?.pass {
                    failed.push(n);
                }
            }
            let o = Outcome::boolean(failed.is_empty());
            Ok(o.with(format!("N = 2..={max_exact}, failing {failed:?}")))
        }),
        check("rk.braid.complex", "(R⊗1)(1⊗R)(R⊗1) = (1⊗R)(R⊗1)(1⊗R) for R^K, floating point", move |_| {
            let mut worst = 0.0f64;
            for n in 2..=max_float {
                worst = worst.max(verify_braid_matrix(&rk::<Complex64>(n, corrupt)?, n, 1e-9)?.deviation);
            }
            Ok(Outcome::within(worst, 1e-9).with(format!("N = 2..={max_float}")))
        }),
        check("rk.pochhammer", "(ω)_[n] conj((ω)_[-n-1]) = N", |_| {
            let ok = (1..=24).all(|n| pochhammer_identity_deviation::<Cyclotomic>(n) == 0.0);
            Ok(Outcome::boolean(ok))
        }),
        check("rk.routes.n3", "four-d-factor form of R = w-function form", |rng| {
            // the w-form needs κ₂′, κ₆′ mutually principal with their Δ
            let principal = |x: Complex64| (delta_fn(delta_fn(x, 3), 3) - x).norm() < 1e-12;
            let kappa = loop {
                let mut k = || Complex64::from_polar(rng.gen_range(0.2..0.7), rng.gen_range(-1.0..1.0));
                let kappa = KappaParams::new(k(), k(), k())?;
                if principal(kappa.k2p(3)) && principal(kappa.k6p(3)) {
                    break kappa;
                }
            };
            let a = build_r_matrix(3, &kappa, BranchPolicy::Principal)?;
            let b = build_r_matrix_w(3, &kappa, BranchPolicy::Principal)?;
            Ok(Outcome::within(a.rel_dist(&b), 1e-10))
        }),
        check("rk.fourier_w", "Fourier transform, inverse and structural identities of w(x,y|n)", move |rng| {
            let mut worst = 0.0f64;
            let mut pass = true;
            for n in 2..=max_w {
                let r = fourier_w_check(n, samples, rng.gen())?;
                pass &= r.pass;
                worst = worst.max(r.families.iter().map(|f| f.max_deviation).fold(0.0, f64::max));
            }
            Ok(Outcome { metric: worst, tolerance: 1e-9, pass, detail: Some(format!("N = 2..={max_w}, {samples} samples")) })
        }),
        check("rk.limit_qy", "(x;q²)_∞ e^{Li₂(x^N)/ε} → √(1−x^N) ∏(1−ζ^k x)^{−k/N}", |_| {
            let r = limit_qy_check(Complex64::new(0.4, 0.0), 3, &[1e-1, 1e-2, 1e-3], QyForm::Plain)?;
            Ok(Outcome { metric: r.final_residual, tolerance: 1e-3, pass: r.pass, detail: None })
        }),
    ];
    if level == Level::Full {
        v.push(check("rk.delta_limit.support", "off-support entries of R vanish as κ₄ = 1 − δ^N → 1", |_| {
            let r = delta_limit_study(3, &[1e-1, 1e-2, 1e-3], 0.4, 0.3)?;
            let last = r.points.last().map_or(f64::NAN, |p| p.off_support);
            Ok(Outcome { metric: last, tolerance: 1e-6, pass: r.pass_support && last <= 1e-6, detail: Some(format!("exponent {:.3}", r.support_exponent)) })
        }));
        v.push(check("rk.delta_limit.gauge", "R ∝ (ρ/N) ω^{ℓ−i+1} R^K as κ₄ = 1 − δ^N → 1", |_| {
            let r = delta_limit_study(3, &[1e-1, 1e-2, 1e-3], 0.4, 0.3)?;
            Ok(Outcome { metric: r.final_deviation, tolerance: 1e-2, pass: r.pass_deviation, detail: Some(format!("decreasing {}", r.deviation_decreasing)) })
        }));
    }
    v
}

fn analytic_checks(level: Level) -> Vec<Check> {
    let res = if level == Level::Fast { 4 } else { 9 };
    let params = || DilogParams::new(Complex64::from_polar(0.8, PI / 8.0));
    let mut v = vec![
        check("phi.inversion", "Φ(z)Φ(−z) = θ(z)", move |_| {
            let r = inversion_check(&params()?, &grid(res, 1.5, 0.3))?;
            Ok(Outcome::within(r.max_deviation, 1e-9))
        }),
        check("phi.shift", "Φ(z ± ib) = (1 + e^{2πbz} q^{±1})^{±1} Φ(z)", move |_| {
            let r = shift_check(&params()?, &grid(res, 1.0, 0.2))?;
            Ok(Outcome::within(r.max_deviation, 1e-8))
        }),
        check("phi.classical_limit", "−2πib² log Φ(z/(2πb)) → Li₂(−e^z) as b → 0", |_| {
            let r = classical_limit_check(Complex64::new(0.5, 0.0), &[0.4, 0.2, 0.1, 0.05], PI / 180.0)?;
            Ok(Outcome { metric: r.final_residual, tolerance: 1e-2, pass: r.pass, detail: None })
        }),
        check("dilog.five_term", "five-term relation of the Bloch–Wigner function", |rng| {
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let (x, y) = (z(), z());
                worst = worst.max(five_term_gap(x, y).abs());
            }
            Ok(Outcome::within(worst, 1e-11))
        }),
        check("volume.octahedron.real", "octahedron volume vanishes for real y", |rng| {
            let y: [Complex64; 7] = std::array::from_fn(|_| Complex64::new(rng.gen_range(0.2..2.0), 0.0));
            Ok(Outcome::within(octahedron_volume(&y)?.volume.abs(), 1e-12))
        }),
    ];
    if level == Level::Full {
        v.push(check("phi.fourier", "∫Φ(z)e^{2πiwz}dz = e^{−2πiwc_b + iπ(1−4c_b²)/12}/Φ(w+c_b)", move |_| {
            let p = params()?;
            let mut worst = 0.0f64;
            let mut pass = true;
            for w in [Complex64::new(0.1, -0.3), Complex64::new(-0.2, -0.25), Complex64::new(0.3, -0.4)] {
                let r = fourier_transform_check(w, &p)?;
                pass &= r.pass;
                worst = worst.max(r.deviation);
            }
            Ok(Outcome { metric: worst, tolerance: 1e-5, pass, detail: None })
        }));
    }
    v
}

fn all_checks(opts: &SuiteOptions) -> Vec<Check> {
    let mut v = classical_checks(opts.level);
    v.extend(quantum_checks(opts.level));
    v.extend(root_checks(opts.level, opts.corrupt_omega));
    v.extend(analytic_checks(opts.level));
    v.sort_by(|a, b| a.id.cmp(b.id));
    v
}

/// Identifiers of the checks run at a level, in report order.
pub fn check_ids(level: Level) -> Vec<&'static str> {
    all_checks(&SuiteOptions::new(level, 0)).iter().map(|c| c.id).collect()
}

fn entry_seed(seed: u64, id: &str) -> u64 {
    // FNV-1a over the id keeps per-check streams independent of scheduling
    id.bytes().fold(0xcbf2_9ce4_8422_2325 ^ seed, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Runs every check of the level concurrently; the report is ordered by id.
pub fn run_check_suite(opts: &SuiteOptions) -> CheckReport {
    let checks = all_checks(opts);
    let entries: Vec<CheckEntry> = checks
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(entry_seed(opts.seed, c.id));
            let out = (c.run)(&mut rng).unwrap_or_else(|e| Outcome {
                metric: f64::INFINITY,
                tolerance: 0.0,
                pass: false,
                detail: Some(format!("error: {e}")),
            });
            CheckEntry {
                id: c.id.into(),
                anchor: c.anchor.into(),
                status: if out.pass { Status::Pass } else { Status::Fail },
                metric: out.metric,
                tolerance: out.tolerance,
                detail: out.detail,
                runtime_ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
            }
        })
        .collect();
    let status = if entries.iter().all(|e| e.status == Status::Pass) { Status::Pass } else { Status::Fail };
    CheckReport { level: opts.level, seed: opts.seed, status, entries }
}
