//! End-to-end tests of the `mrlog` binary: exit-status conventions, file
//! formats, and byte-stable reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mrlog"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mrlog")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mrlog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gen_serialize_parse_round_trip_is_identity() {
    let z = tmp("arith.json");
    let st = run(&["gen", "--family", "arith", "--step", "3.141592653589793", "--count", "3",
                   "--out", z.to_str().unwrap()]);
    assert_eq!(code(&st), 0);
    let parsed: mrlog::PointDistribution =
        serde_json::from_str(&std::fs::read_to_string(&z).unwrap()).unwrap();
    let expected = mrlog::PointDistribution::new((1..=3).map(|k| {
        (num_complex::Complex64::new(k as f64 * std::f64::consts::PI, 0.0), 1)
    }));
    assert_eq!(parsed, expected);

    // mirrored-arith(1, 2) -> {1, 2, -1, -2}
    let out = run(&["gen", "--family", "mirrored-arith", "--step", "1", "--count", "2"]);
    let parsed: mrlog::PointDistribution = serde_json::from_slice(&out.stdout).unwrap();
    let expected = mrlog::PointDistribution::new(
        [(1.0, 1u64), (2.0, 1), (-1.0, 1), (-2.0, 1)]
            .map(|(re, m)| (num_complex::Complex64::new(re, 0.0), m)),
    );
    assert_eq!(parsed, expected);
}

#[test]
fn seeded_generation_is_deterministic() {
    let a = run(&["gen", "--family", "perturbed-lattice", "--step", "1", "--count", "100",
                  "--jitter", "0.1", "--seed", "7"]);
    let b = run(&["gen", "--family", "perturbed-lattice", "--step", "1", "--count", "100",
                  "--jitter", "0.1", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "identical bytes for identical config");
    let c = run(&["gen", "--family", "perturbed-lattice", "--step", "1", "--count", "100",
                  "--jitter", "0.1", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout, "different seed, different output");
}

#[test]
fn gen_rejects_invalid_parameters() {
    let out = run(&["gen", "--family", "arith", "--step", "0", "--count", "3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--step"));
    let out = run(&["gen", "--family", "nope", "--count", "3"]);
    assert_eq!(code(&out), 1);
    let out = run(&["gen", "--family", "sector", "--count", "3", "--half-angle", "2.0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn check_mr_exit_codes_and_identity_case() {
    let z = tmp("kpi.json");
    let st = run(&["gen", "--family", "arith", "--step", "3.141592653589793",
                   "--count", "4000", "--out", z.to_str().unwrap()]);
    assert_eq!(code(&st), 0);

    // Z = W: sup 0, bounded-consistent, exit 0.
    let out = run(&["check-mr", "--z", z.to_str().unwrap(), "--w", z.to_str().unwrap(),
                    "--r0", "1", "--levels", "12"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "check-mr");
    assert_eq!(v["result"]["sup_value"], 0.0);
    assert_eq!(v["result"]["verdict"], "bounded-consistent");

    // Swapped harmonic pair: growth detected, exit 2.
    let z2 = tmp("2kpi.json");
    let st = run(&["gen", "--family", "arith", "--step", "6.283185307179586",
                   "--count", "2000", "--out", z2.to_str().unwrap()]);
    assert_eq!(code(&st), 0);
    let out = run(&["check-mr", "--z", z.to_str().unwrap(), "--w", z2.to_str().unwrap(),
                    "--r0", "1", "--levels", "12"]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["verdict"], "growth-detected");
}

#[test]
fn lemma_runs_and_reports_bounded() {
    let model = tmp("sin.model.json");
    write(&model, r#"{"factors":[{"kind":"sinc"},{"kind":"power","k":1}]}"#);
    let out = run(&["lemma", "--model", model.to_str().unwrap(), "--r0", "1", "--levels", "8"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["verdict"], "bounded-consistent");
    assert!(v["result"]["sup_value"].as_f64().unwrap() <= 1.0);
}

#[test]
fn product_eval_emits_pairs_and_null_at_zeros() {
    let model = tmp("even.model.json");
    write(&model, r#"{"factors":[{"kind":"even_pair","re":1.0,"im":0.0,"mult":1}]}"#);
    let pts = tmp("eval-points.json");
    write(&pts, r#"{"points":[{"re":1.0,"im":0.0},{"re":2.0,"im":0.0}]}"#);
    let out = run(&["product-eval", "--model", model.to_str().unwrap(),
                    "--z", pts.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let evals = v["result"].as_array().unwrap();
    assert_eq!(evals.len(), 2);
    // ln|1 - z^2| at the zero z = 1 encodes as null, at z = 2 it is ln 3.
    assert!(evals[0]["log_modulus"].is_null());
    let lm = evals[1]["log_modulus"].as_f64().unwrap();
    assert!((lm - 3.0f64.ln()).abs() < 1e-12);
}

#[test]
fn dominate_exit_codes() {
    let g = tmp("dom-g.json");
    write(&g, r#"{"factors":[{"kind":"even_pair","re":3.141592653589793,"im":0.0,"mult":1}]}"#);
    let f = tmp("dom-f.json");
    write(
        &f,
        r#"{"factors":[{"kind":"scalar","re":0.5,"im":0.0},{"kind":"even_pair","re":3.141592653589793,"im":0.0,"mult":1}]}"#,
    );
    let out = run(&["dominate", "--model", f.to_str().unwrap(), "--model", g.to_str().unwrap(),
                    "--y-max", "30", "--samples", "200"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["holds"], true);

    let out = run(&["dominate", "--model", g.to_str().unwrap(), "--model", f.to_str().unwrap(),
                    "--y-max", "30", "--samples", "200"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn witness_flow() {
    let z = tmp("wit-z.json");
    write(
        &z,
        r#"{"points":[{"re":0.01,"im":1.0},{"re":1.0,"im":0.0},{"re":2.0,"im":0.0},{"re":3.0,"im":0.0}]}"#,
    );
    let w = tmp("wit-w.json");
    write(&w, r#"{"points":[{"re":1.0,"im":0.0},{"re":2.0,"im":0.0},{"re":3.0,"im":0.0}]}"#);
    let out = run(&["witness", "--z", z.to_str().unwrap(), "--w", w.to_str().unwrap(),
                    "--d", "0.5", "--y-max", "30", "--samples", "200"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["vanishes_on_z"], true);
    assert_eq!(v["result"]["domination"]["holds"], true);
    // The embedded witness model is itself a loadable model document.
    let model_json = serde_json::to_string(&v["result"]["witness"]).unwrap();
    let _model: mrlog::EntireFunctionModel = serde_json::from_str(&model_json).unwrap();
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let z = tmp("stable-z.json");
    let st = run(&["gen", "--family", "sector", "--count", "200", "--density", "0.5",
                   "--half-angle", "0.7", "--seed", "11", "--out", z.to_str().unwrap()]);
    assert_eq!(code(&st), 0);
    let args = ["separation", "--z", z.to_str().unwrap(), "--tail-fraction", "0.25"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let chars_args = ["chars", "--z", z.to_str().unwrap(), "--r0", "1", "--levels", "8"];
    let a = run(&chars_args);
    let b = run(&chars_args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_failures_name_the_line() {
    let bad = tmp("bad.json");
    write(&bad, "{\n  \"points\": [\n    {\"re\": \"x\"}\n  ]\n}\n");
    let out = run(&["density", "--z", bad.to_str().unwrap(), "--r0", "1"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:"), "diagnostic should carry the line: {err}");

    // Unknown fields are rejected.
    let unknown = tmp("unknown.json");
    write(&unknown, r#"{"points":[{"re":1.0,"im":0.0,"weight":3}]}"#);
    let out = run(&["density", "--z", unknown.to_str().unwrap(), "--r0", "0.5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = run(&["check-mr", "--z", "missing.json"]);
    assert_eq!(code(&out), 1, "missing required flag is a usage error");
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let help = String::from_utf8_lossy(&out.stdout);
    for sub in ["chars", "density", "separation", "check-mr", "lemma", "product-eval",
                "dominate", "witness", "gen"] {
        assert!(help.contains(sub), "help must list {sub}");
    }
}

#[test]
fn out_flag_writes_file_and_silences_stdout() {
    let z = tmp("outflag-z.json");
    let st = run(&["gen", "--family", "arith", "--step", "1", "--count", "50",
                   "--out", z.to_str().unwrap()]);
    assert_eq!(code(&st), 0);
    let report = tmp("outflag-report.json");
    let out = run(&["chars", "--z", z.to_str().unwrap(), "--r0", "1", "--levels", "4",
                    "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["command"], "chars");
    assert_eq!(v["config"]["levels"], 4);
}
