use qbraid_cli::suite::{check_ids, run_check_suite, Level, Status, SuiteOptions};
use qbraid_cli::{parse_complex, run};
use serde_json::Value;

fn call(args: &[&str]) -> (Value, i32) {
    let (text, code) = run(std::iter::once("qbraid").chain(args.iter().copied()));
    (serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}")), code)
}

#[test]
fn fast_suite_passes() {
    let r = run_check_suite(&SuiteOptions::new(Level::Fast, 0));
    let failing: Vec<_> = r.entries.iter().filter(|e| e.status == Status::Fail).map(|e| &e.id).collect();
    assert!(failing.is_empty(), "{failing:?}");
    assert_eq!(r.entries.len(), check_ids(Level::Fast).len());
}

#[test]
fn report_is_deterministic_for_a_seed() {
    let a = run(["qbraid", "checkall", "--level", "fast", "--seed", "7"]);
    let b = run(["qbraid", "checkall", "--level", "fast", "--seed", "7"]);
    assert_eq!(a, b);
    assert_eq!(a.1, 0);
}

#[test]
fn timings_are_opt_in() {
    let (v, _) = call(&["checkall", "--timings"]);
    assert!(v["entries"][0]["runtime_ms"].is_number());
    let (v, _) = call(&["checkall"]);
    assert!(v["entries"][0].get("runtime_ms").is_none());
}

#[test]
fn corrupted_phase_fails_the_braid_checks() {
    let mut opts = SuiteOptions::new(Level::Fast, 0);
    opts.corrupt_omega = true;
    let r = run_check_suite(&opts);
    assert_eq!(r.status, Status::Fail);
    for id in ["rk.braid.cyclotomic", "rk.braid.complex"] {
        let e = r.entries.iter().find(|e| e.id == id).unwrap();
        assert_eq!(e.status, Status::Fail, "{id}");
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (v, code) = call(&["--bogus"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("--bogus"));
    let (_, code) = call(&["rk", "build", "--N", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn braid_verify_y_mode() {
    let (v, code) = call(&["braid", "verify", "--n", "3", "--mode", "y"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "PASS");
}

#[test]
fn braid_eval_on_the_initial_seed() {
    let (v, code) = call(&["braid", "eval", "--n", "2", "--word", "s1 s1^-1", "--mode", "x"]);
    assert_eq!(code, 0);
    let x: Vec<&str> = v["x"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(x, ["x1", "x2", "x3", "x4", "x5", "x6", "x7"]);
}

#[test]
fn phi_eval_reports_a_complex_pair() {
    let (v, code) = call(&["phi", "eval", "--z", "0.3+0.1i", "--b", "0.7+0.2i"]);
    assert_eq!(code, 0);
    assert_eq!(v["method"], "product");
    let re = v["value"][0].as_f64().unwrap();
    let im = v["value"][1].as_f64().unwrap();
    assert!((re - 0.8071192855635961).abs() < 1e-10 && (im + 0.7271213823115992).abs() < 1e-10);
    let (v, _) = call(&["phi", "eval", "--z", "0", "--b", "0.8"]);
    assert_eq!(v["method"], "integral");
}

#[test]
fn rk_build_shape() {
    let (v, code) = call(&["rk", "build", "--N", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 9);
    let m = v["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 9);
    assert_eq!(m[0].as_array().unwrap().len(), 9);
}

#[test]
fn rk_limit_fails_the_gauge_part() {
    let (v, code) = call(&["rk", "limit", "--N", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass_support"], true);
    assert_eq!(v["pass_deviation"], false);
}

#[test]
fn volume_of_real_values_is_zero() {
    let path = std::env::temp_dir().join(format!("qbraid-y-{}.json", std::process::id()));
    std::fs::write(&path, "[1.5, 2, 0.5, 3, [1.2, 0], 0.7, 2.5]").unwrap();
    let (v, code) = call(&["volume", "octa", "--y", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
}

#[test]
fn complex_literals() {
    let c = |s| parse_complex(s).unwrap();
    assert_eq!(c("0.3+0.1i"), num_complex::Complex64::new(0.3, 0.1));
    assert_eq!(c("-2"), num_complex::Complex64::new(-2.0, 0.0));
    assert_eq!(c("-i"), num_complex::Complex64::new(0.0, -1.0));
    assert_eq!(c("1e-3-2.5e+1i"), num_complex::Complex64::new(1e-3, -25.0));
    assert_eq!(c("2j"), num_complex::Complex64::new(0.0, 2.0));
    assert!(parse_complex("1+2k").is_err());
}

#[test]
fn full_suite_fails_only_the_gauge_limit() {
    let r = run_check_suite(&SuiteOptions::new(Level::Full, 0));
    let failing: Vec<_> = r.entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.id.as_str()).collect();
    assert_eq!(failing, ["rk.delta_limit.gauge"]);
}
