use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gamma_lcm_core::RatioSpec;
use serde_json::Value;
use tempfile::TempDir;

const EXAMPLES: &str = r#"{
  "specs": [
    {"name": "three_over_two", "A": [2, 3, 1], "a": [0.4, 2.4, 0.9], "B": [1, 5], "b": [2, 6]},
    {"name": "bernstein_pair", "A": [4, 2], "a": [0.7, 1.8], "B": [3, 1], "b": [0.6, 1.2]},
    {"name": "trivial", "A": [1], "a": [1], "B": [1], "b": [1]},
    {"name": "beta", "A": [1.5], "a": [0.5], "B": [1.5], "b": [2]}
  ],
  "commands": ["classify"],
  "seed": 11
}"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("job.json");
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamma-lcm")).args(args).output().unwrap()
}

fn run_job(dir: &Path, config: &Path, out: &str, extra: &[&str]) -> Output {
    let out = dir.join(out);
    let mut args = vec!["--config", config.to_str().unwrap(), "--output", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn report(dir: &Path, out: &str, spec: &str, command: &str) -> Value {
    let text = fs::read_to_string(dir.join(out).join(spec).join(format!("{command}.report"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn exit_code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn example2_classifies_as_lcm() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    let o = run_job(dir.path(), &cfg, "out", &[]);
    assert_eq!(exit_code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "out", "three_over_two", "classify");
    assert_eq!(r["result"]["classification"], "LCM");
    let rho = r["derived"]["rho"].as_f64().unwrap();
    assert!((rho - 0.03456).abs() < 1e-5);
    assert_eq!(r["status"], "ok");
}

#[test]
fn example4_is_a_bernstein_derivative() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    assert_eq!(exit_code(&run_job(dir.path(), &cfg, "out", &[])), 0);
    let r = report(dir.path(), "out", "bernstein_pair", "classify");
    assert_eq!(r["result"]["classification"], "BERNSTEIN_DERIVATIVE");
    let nec_a = r["result"]["evidence"].as_array().unwrap().iter().find(|e| e["condition_id"] == "NEC_A").unwrap();
    assert_eq!(nec_a["status"], "fails");
}

#[test]
fn trivial_spec_verifies_its_measure() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    let o = run_job(dir.path(), &cfg, "out", &["--command", "verify-measure"]);
    assert_eq!(exit_code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path(), "out", "trivial", "verify-measure");
    assert_eq!(r["status"], "ok");
    for check in r["result"]["checks"].as_array().unwrap() {
        assert!(check["max_residual"].as_f64().unwrap() <= check["tolerance"].as_f64().unwrap());
    }
    // --command replaces the job file's list
    assert!(!dir.path().join("out/trivial/classify.report").exists());
}

#[test]
fn reports_and_curves_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        &EXAMPLES.replace(r#"["classify"]"#, r#"["classify", "verify-measure", "mc-moments"]"#),
    );
    let a = run_job(dir.path(), &cfg, "a", &[]);
    let b = Command::new(env!("CARGO_BIN_EXE_gamma-lcm"))
        .env("RAYON_NUM_THREADS", "1")
        .args(["--config", cfg.to_str().unwrap(), "--output", dir.path().join("b").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&a), 0);
    assert_eq!(exit_code(&b), 0);
    let mut compared = 0;
    for spec in ["three_over_two", "bernstein_pair", "trivial", "beta"] {
        for entry in fs::read_dir(dir.path().join("a").join(spec)).unwrap() {
            let path = entry.unwrap().path();
            let twin = dir.path().join("b").join(spec).join(path.file_name().unwrap());
            assert_eq!(fs::read(&path).unwrap(), fs::read(&twin).unwrap(), "{}", path.display());
            compared += 1;
        }
    }
    assert!(compared >= 16);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a/metadata.json")).unwrap()).unwrap();
    assert!(meta["generated_unix_seconds"].as_u64().unwrap() > 0);
    assert_eq!(meta["seed"], 11);
}

#[test]
fn seed_flag_changes_monte_carlo_only() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    let args = ["--command", "mc-moments", "--command", "classify"];
    assert_eq!(exit_code(&run_job(dir.path(), &cfg, "a", &args)), 0);
    let mut with_seed = args.to_vec();
    with_seed.extend(["--seed", "12"]);
    assert_eq!(exit_code(&run_job(dir.path(), &cfg, "b", &with_seed)), 0);
    let mc_a = report(dir.path(), "a", "beta", "mc-moments");
    let mc_b = report(dir.path(), "b", "beta", "mc-moments");
    assert_eq!(mc_a["result"]["seed"], 11);
    assert_eq!(mc_b["result"]["seed"], 12);
    assert_ne!(mc_a["result"]["check"]["lhs"], mc_b["result"]["check"]["lhs"]);
    assert_eq!(report(dir.path(), "a", "beta", "classify"), report(dir.path(), "b", "beta", "classify"));
    assert_eq!(report(dir.path(), "a", "three_over_two", "mc-moments")["status"], "not_applicable");
}

#[test]
fn spec_round_trips_through_reports() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    assert_eq!(exit_code(&run_job(dir.path(), &cfg, "out", &[])), 0);
    let original = RatioSpec::from_slices(&[2.0, 3.0, 1.0], &[0.4, 2.4, 0.9], &[1.0, 5.0], &[2.0, 6.0]).unwrap();
    let r = report(dir.path(), "out", "three_over_two", "classify");
    let parsed: RatioSpec = serde_json::from_value(r["spec"].clone()).unwrap();
    assert_eq!(parsed, original);
}

#[test]
fn curves_are_csv_with_headers() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    let o = run_job(dir.path(), &cfg, "out", &["--command", "eval-h", "--command", "zeros"]);
    assert_eq!(exit_code(&o), 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("out/beta/eval-h.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["x", "value", "error_estimate"]);
    let rows: Vec<Vec<f64>> =
        rdr.records().map(|r| r.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 64);
    // H for Γ(1.5x+0.5)/Γ(1.5x+2) is the density of ζ^{1.5}, ζ ~ Beta(2, 1.5)
    assert!(rows.iter().all(|r| r[1] > 0.0 && r[2] >= 0.0));
    let zeros = fs::read_to_string(dir.path().join("out/beta/zeros.csv")).unwrap();
    assert!(zeros.starts_with("t,value,error_estimate\n"));
    assert!(!dir.path().join("out/bernstein_pair/eval-h.csv").exists());
    assert_eq!(report(dir.path(), "out", "bernstein_pair", "eval-h")["status"], "not_applicable");
}

#[test]
fn failing_checks_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), EXAMPLES);
    let o = run_job(dir.path(), &cfg, "out", &["--command", "verify-measure", "--tol-scale", "1e-300"]);
    assert_eq!(exit_code(&o), 2);
    let r = report(dir.path(), "out", "beta", "verify-measure");
    assert_eq!(r["status"], "failed");
    assert_eq!(r["tolerance_scale"], 1e-300);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["exit_code"], 2);
    assert!(meta["failures"].as_array().unwrap().iter().any(|f| f == "beta/verify-measure"));
}

#[test]
fn input_errors_exit_with_1() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(exit_code(&run(&["--config", missing.to_str().unwrap()])), 1);

    let cfg = write_config(
        dir.path(),
        "{\n  \"specs\": [\n    {\"name\": \"x\", \"A\": [1], \"a\": [0], \"B\": [1]}\n  ]\n}",
    );
    let o = run_job(dir.path(), &cfg, "out", &[]);
    assert_eq!(exit_code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("job.json:") && err.contains("missing field `b`"), "{err}");

    let cfg = write_config(dir.path(), &EXAMPLES.replace("[0.6, 1.2]", "[0.6, -1.2]"));
    let o = run_job(dir.path(), &cfg, "out", &[]);
    assert_eq!(exit_code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("specs[1] (bernstein_pair)"));

    let cfg = write_config(dir.path(), EXAMPLES);
    assert_eq!(exit_code(&run_job(dir.path(), &cfg, "out", &["--command", "frobnicate"])), 1);
    assert_eq!(exit_code(&run_job(dir.path(), &cfg, "out", &["--tol-scale", "-1"])), 1);
    assert_eq!(exit_code(&run(&[])), 1);
    assert_eq!(exit_code(&run(&["--help"])), 0);
}
