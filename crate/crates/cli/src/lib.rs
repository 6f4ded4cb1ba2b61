//! Command-line front end: argument parsing, JSON I/O and the check suite.

pub mod suite;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qbraid::analytic::{faddeev_phi, faddeev_phi_integral, octahedron_volume, DilogParams};
use qbraid::braid::{evaluate_braid_word, strands_for_size, verify_braid_relations, BraidWord, Mode};
use qbraid::cluster::{quiver_from_matrix, SeedJson};
use qbraid::cluster::Seed;
use qbraid::opcalc::{replay, replay_braid_proof, verify_adjoint};
use qbraid::qtorus::verify_rq_equals_mutations;
use qbraid::rootunity::{
    build_rk, delta_limit_study, fourier_w_check, matrix_pairs, verify_braid_matrix, BraidMatrixReport,
};
use qbraid::{ClusterSeed, Cyclotomic, Matrix, RootField, YSeed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use suite::{run_check_suite, Level, Status, SuiteOptions};

#[derive(Parser, Debug)]
#[command(name = "qbraid", version, about = "Cluster-algebraic braiding operators and their verification")]
pub struct Cli {
    /// Indented JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Worker threads for parallel checks.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Seed mutation and the y-variables of a seed.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// The classical braid R-operator.
    #[command(subcommand)]
    Braid(BraidCmd),
    /// The quantum R^q-operator in root-of-unity representations.
    #[command(subcommand)]
    Qtorus(QtorusCmd),
    /// Rewrite derivations of quantum-dilogarithm words.
    #[command(subcommand)]
    Opcalc(OpcalcCmd),
    /// Root-of-unity R-matrices.
    #[command(subcommand)]
    Rk(RkCmd),
    /// The Faddeev quantum dilogarithm.
    #[command(subcommand)]
    Phi(PhiCmd),
    /// Hyperbolic volumes.
    #[command(subcommand)]
    Volume(VolumeCmd),
    /// Runs the verification suite.
    Checkall(CheckallArgs),
}

#[derive(Subcommand, Debug)]
pub enum ClusterCmd {
    /// Mutates an x-seed (or a y-seed with --y) at a 1-based index.
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        y: bool,
    },
    /// y-variables of an x-seed.
    YFromX {
        #[arg(long)]
        seed: PathBuf,
    },
    /// Arrow list of the quiver of the seed's exchange matrix.
    Quiver {
        #[arg(long)]
        seed: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SeedMode {
    X,
    Y,
}

#[derive(Subcommand, Debug)]
pub enum BraidCmd {
    /// Applies a braid word such as "s1 s2^-1 s1".
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: String,
        /// Seed JSON file; defaults to the initial seed.
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "y")]
        mode: SeedMode,
    },
    /// Checks the braid and far-commutation relations exactly.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "y")]
        mode: SeedMode,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FieldMode {
    Complex,
    Cyclotomic,
}

#[derive(Subcommand, Debug)]
pub enum QtorusCmd {
    /// Compares the closed form of R^q with its quantum mutation word.
    VerifyRq {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        order: u32,
        #[arg(long, value_enum, default_value = "complex")]
        mode: FieldMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OpcalcCmd {
    /// Replays a proof script (the built-in three-strand derivation by default).
    Replay {
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Derives R Y_j R^{-1} on a window and cross-checks it in representations.
    Adjoint {
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum RkCmd {
    /// Writes R^K as nested [re, im] pairs.
    Build {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, value_enum, default_value = "complex")]
        mode: FieldMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the braid relation of R^K.
    BraidCheck {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, value_enum, default_value = "complex")]
        mode: FieldMode,
    },
    /// Compares R at κ₄ = 1 − δ^N with R^K along a δ sequence.
    Limit {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3")]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 0.4)]
        k2: f64,
        #[arg(long, default_value_t = 0.3)]
        k6: f64,
    },
    /// Identities of the cyclic dilogarithm w(x,y|n) on random points.
    Fourier {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PhiCmd {
    /// Evaluates Φ(z); products for Im b² > 0, the integral for real b.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum VolumeCmd {
    /// Signed octahedron volume from seven y-values.
    Octa {
        /// JSON array of seven numbers or [re, im] pairs.
        #[arg(long)]
        y: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct CheckallArgs {
    #[arg(long, value_enum, default_value = "fast")]
    pub level: Level,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include per-check wall-clock times.
    #[arg(long)]
    pub timings: bool,
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `-i` or a real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {s:?}");
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|v| Complex64::new(v, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

/// A finished command: JSON payload and exit code.
pub struct Output {
    pub value: Value,
    pub code: i32,
}

fn ok(v: impl Serialize) -> Result<Output, String> {
    Ok(Output { value: serde_json::to_value(v).map_err(|e| e.to_string())?, code: 0 })
}

fn verdict(v: impl Serialize, pass: bool) -> Result<Output, String> {
    Ok(Output { value: serde_json::to_value(v).map_err(|e| e.to_string())?, code: if pass { 0 } else { 1 } })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cluster(cmd: ClusterCmd) -> Result<Output, String> {
    match cmd {
        ClusterCmd::Mutate { seed, k, y } => {
            let s: SeedJson = read_json(&seed)?;
            if y {
                ok(SeedJson::from_y_seed(&s.to_y_seed().map_err(err)?.mutate(k).map_err(err)?))
            } else {
                ok(SeedJson::from_cluster_seed(&s.to_cluster_seed().map_err(err)?.mutate(k).map_err(err)?))
            }
        }
        ClusterCmd::YFromX { seed } => {
            let s: SeedJson = read_json(&seed)?;
            ok(SeedJson::from_y_seed(&s.to_cluster_seed().map_err(err)?.y_seed()))
        }
        ClusterCmd::Quiver { seed } => {
            let s: SeedJson = read_json(&seed)?;
            ok(quiver_from_matrix(&s.matrix().map_err(err)?))
        }
    }
}

fn braid(cmd: BraidCmd) -> Result<Output, String> {
    match cmd {
        BraidCmd::Eval { n, word, seed, mode } => {
            let w = BraidWord::parse(n, &word).map_err(err)?;
            let b = qbraid::braid::build_braid_matrix(n).map_err(err)?;
            let file: Option<SeedJson> = seed.as_ref().map(read_json).transpose()?;
            if let Some(f) = &file {
                if strands_for_size(f.size).map_err(err)? != n {
                    return Err(format!("seed of size {} does not match {n} strands", f.size));
                }
            }
            match mode {
                SeedMode::X => {
                    let s = match &file {
                        Some(f) => f.to_cluster_seed().map_err(err)?,
                        None => ClusterSeed::initial(b),
                    };
                    ok(SeedJson::from_cluster_seed(&evaluate_braid_word(&w, &s).map_err(err)?))
                }
                SeedMode::Y => {
                    let s = match &file {
                        Some(f) => f.to_y_seed().map_err(err)?,
                        None => YSeed::initial(b),
                    };
                    ok(SeedJson::from_y_seed(&evaluate_braid_word(&w, &s).map_err(err)?))
                }
            }
        }
        BraidCmd::Verify { n, mode } => {
            let mode = match mode {
                SeedMode::X => Mode::X,
                SeedMode::Y => Mode::Y,
            };
            let r = verify_braid_relations(n, mode).map_err(err)?;
            let pass = r.pass();
            verdict(json!({ "report": r, "status": if pass { "PASS" } else { "FAIL" } }), pass)
        }
    }
}

fn qtorus(cmd: QtorusCmd) -> Result<Output, String> {
    let QtorusCmd::VerifyRq { n, order, mode, seed } = cmd;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = match mode {
        FieldMode::Complex => verify_rq_equals_mutations::<Complex64, _>(n, order, &mut rng),
        FieldMode::Cyclotomic => verify_rq_equals_mutations::<Cyclotomic, _>(n, order, &mut rng),
    }
    .map_err(err)?;
    let pass = r.pass;
    verdict(r, pass)
}

fn opcalc(cmd: OpcalcCmd) -> Result<Output, String> {
    match cmd {
        OpcalcCmd::Replay { script } => {
            let r = match script {
                Some(p) => replay(&fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?),
                None => replay_braid_proof(),
            }
            .map_err(err)?;
            let pass = r.pass;
            verdict(r, pass)
        }
        OpcalcCmd::Adjoint { i, seed } => {
            let r = verify_adjoint(i, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?;
            let pass = r.pass;
            verdict(r, pass)
        }
    }
}

fn matrix_json<T: RootField>(n: u32, mode: &str, m: &Matrix<T>) -> Value {
    json!({ "N": n, "dim": m.rows(), "mode": mode, "matrix": matrix_pairs(m) })
}

fn rk(cmd: RkCmd) -> Result<Output, String> {
    match cmd {
        RkCmd::Build { n, mode, out } => {
            let v = match mode {
                FieldMode::Complex => matrix_json(n, "complex", &build_rk::<Complex64>(n).map_err(err)?),
                FieldMode::Cyclotomic => matrix_json(n, "cyclotomic", &build_rk::<Cyclotomic>(n).map_err(err)?),
            };
            match out {
                Some(p) => {
                    fs::write(&p, serde_json::to_string(&v).map_err(err)?).map_err(|e| format!("{}: {e}", p.display()))?;
                    ok(json!({ "N": n, "dim": n * n, "written": p.display().to_string() }))
                }
                None => ok(v),
            }
        }
        RkCmd::BraidCheck { n, mode } => {
            let r: BraidMatrixReport = match mode {
                FieldMode::Complex => verify_braid_matrix(&build_rk::<Complex64>(n).map_err(err)?, n, 1e-9),
                FieldMode::Cyclotomic => verify_braid_matrix(&build_rk::<Cyclotomic>(n).map_err(err)?, n, 0.0),
            }
            .map_err(err)?;
            let pass = r.pass;
            verdict(r, pass)
        }
        RkCmd::Limit { n, deltas, k2, k6 } => {
            let r = delta_limit_study(n, &deltas, k2, k6).map_err(err)?;
            let pass = r.pass_deviation && r.pass_support;
            verdict(r, pass)
        }
        RkCmd::Fourier { n, samples, seed } => {
            let r = fourier_w_check(n, samples, seed).map_err(err)?;
            let pass = r.pass;
            verdict(r, pass)
        }
    }
}

fn phi(cmd: PhiCmd) -> Result<Output, String> {
    let PhiCmd::Eval { z, b } = cmd;
    let (z, b) = (parse_complex(&z)?, parse_complex(&b)?);
    let (value, method) = if (b * b).im > 0.0 {
        (faddeev_phi(z, &DilogParams::new(b).map_err(err)?).map_err(err)?, "product")
    } else if (b * b).im.abs() <= 1e-15 * (b * b).norm() {
        (faddeev_phi_integral(z, b).map_err(err)?, "integral")
    } else {
        return Err("b must satisfy Im b² ≥ 0".into());
    };
    ok(json!({ "value": [value.re, value.im], "method": method }))
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Number {
    Real(f64),
    Pair([f64; 2]),
}

fn volume(cmd: VolumeCmd) -> Result<Output, String> {
    let VolumeCmd::Octa { y } = cmd;
    let raw: Vec<Number> = read_json(&y)?;
    if raw.len() != 7 {
        return Err(format!("expected 7 values, got {}", raw.len()));
    }
    let vals: Vec<Complex64> = raw
        .into_iter()
        .map(|v| match v {
            Number::Real(r) => Complex64::new(r, 0.0),
            Number::Pair([a, b]) => Complex64::new(a, b),
        })
        .collect();
    let arr: [Complex64; 7] = vals.try_into().unwrap();
    let r = octahedron_volume(&arr).map_err(err)?;
    ok(json!({ "value": r.volume, "terms": r.terms }))
}

fn checkall(a: CheckallArgs) -> Result<Output, String> {
    let mut opts = SuiteOptions::new(a.level, a.seed);
    opts.timings = a.timings;
    let r = run_check_suite(&opts);
    let pass = r.status == Status::Pass;
    verdict(r, pass)
}

/// Executes a parsed command.
pub fn execute(cli: Cli) -> Output {
    let res = match cli.command {
        Command::Cluster(c) => cluster(c),
        Command::Braid(c) => braid(c),
        Command::Qtorus(c) => qtorus(c),
        Command::Opcalc(c) => opcalc(c),
        Command::Rk(c) => rk(c),
        Command::Phi(c) => phi(c),
        Command::Volume(c) => volume(c),
        Command::Checkall(a) => checkall(a),
    };
    res.unwrap_or_else(|e| Output { value: json!({ "error": e }), code: 2 })
}

/// Parses `args` (program name first), runs the command and returns the
/// rendered output and exit code: 0 success, 1 failed check, 2 usage error.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                return (e.to_string(), 0);
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return (json!({ "error": first, "usage": true }).to_string(), 2);
        }
    };
    if let Some(j) = cli.jobs {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let pretty = cli.pretty;
    let out = execute(cli);
    let text = if pretty { serde_json::to_string_pretty(&out.value) } else { serde_json::to_string(&out.value) };
    (text.unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}")), out.code)
}
