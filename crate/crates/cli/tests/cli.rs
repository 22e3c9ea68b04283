use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn quadsemi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadsemi")).args(args).output().expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = quadsemi(&full);
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    (out.status.code().unwrap(), v)
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

/// Compares against `tests/golden/<name>.json`; set `UPDATE_GOLDEN=1` to rewrite.
fn golden(name: &str, args: &[&str]) {
    let (code, v) = json_report(args);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert!(v["timings"]["elapsed_ms"].is_number());
    let v = strip_timings(v);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap() + "\n").unwrap();
    }
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v, expected, "report differs from {}", path.display());
}

#[test]
fn golden_orbit() {
    golden("orbit", &["orbit", "-c", "-4,-12", "-w", "2,1"]);
}

#[test]
fn golden_exceptional() {
    golden("exceptional", &["exceptional", "-c1", "-12", "-c2", "-21"]);
}

#[test]
fn golden_verify_lemma() {
    golden("verify_lemma", &["verify-lemma", "case1.3", "--bound", "3"]);
}

#[test]
fn orbit_example() {
    let (code, v) = json_report(&["orbit", "-c", "-4,-12", "-w", "2,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["witnesses"]["orbit"], serde_json::json!([12, 4]));
    assert_eq!(v["verdicts"]["status"], "Unknown");
    assert_eq!(v["verdicts"]["first_square_index"], 2);
}

#[test]
fn verify_all_matches() {
    let (code, v) = json_report(&["verify-lemma", "--all", "--bound", "50"]);
    assert_eq!(code, 0);
    let records = v["verdicts"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 48);
    assert!(records.iter().all(|r| r["verdict"] == "Match"));
}

#[test]
fn scan_pairs_example() {
    let (code, v) = json_report(&["scan-pairs", "--min", "-100", "--max", "100"]);
    assert_eq!(code, 0);
    let mut pairs: Vec<(i64, i64)> = v["witnesses"]["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["c1"].as_i64().unwrap(), p["c2"].as_i64().unwrap()))
        .collect();
    pairs.sort();
    let mut expect: Vec<(i64, i64)> = [(-1, -3), (0, -1), (0, -3), (-12, -21), (-72, -91)]
        .iter()
        .flat_map(|&(a, b)| [(a, b), (b, a)])
        .collect();
    expect.sort();
    assert_eq!(pairs, expect);
}

#[test]
fn tampered_registry_reports_mismatch() {
    let text = quadsemi::diophantine::REGISTRY_TOML.replacen(
        r#"claimed = ["(±1, 0, 0, ±1)", "(0, ±1, ±1, 0)", "(±u^2, ±u^2, ±u, ±u)"]"#,
        r#"claimed = ["(0, ±1, ±1, 0)", "(±u^2, ±u^2, ±u, ±u)"]"#,
        1,
    );
    assert_ne!(text, quadsemi::diophantine::REGISTRY_TOML);
    let path = std::env::temp_dir().join(format!("quadsemi-tampered-{}.toml", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_quadsemi"))
        .args(["--json", "verify-lemma", "case1.1"])
        .env("QUADSEMI_REGISTRY", &path)
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rec = &v["verdicts"]["records"][0];
    assert_eq!(rec["verdict"], "Mismatch");
    assert_eq!(rec["extra"].as_array().unwrap().len(), 2);
    assert!(rec["missing"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| quadsemi(args).status.code().unwrap();
    assert_eq!(code(&["obstruction", "case2.15", "--mod", "4"]), 0);
    assert_eq!(code(&["obstruction", "case1.1", "--mod", "4"]), 2);
    assert_eq!(code(&["obstruction", "case9.9", "--mod", "4"]), 2);
    assert_eq!(code(&["construct-prefix", "-c", "1,3"]), 0);
    assert_eq!(code(&["construct-prefix", "-c", "-4"]), 2);
    assert_eq!(code(&["cross-validate", "-c", "-4,-12", "-L", "3"]), 0);
    assert_eq!(code(&["heights", "-c", "0"]), 2);
    assert_eq!(code(&["orbit", "-c", "1,1", "-w", "1"]), 2);
    assert_eq!(code(&["orbit", "-c", "1,2", "-w", "3"]), 2);
    assert_eq!(code(&["verify-lemma"]), 2);
    assert_eq!(code(&["curve-points", "--coeffs", "1,1", "--bound", "10"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn heights_examples() {
    for c in ["3", "-12"] {
        let (code, v) = json_report(&["heights", "-c", c]);
        assert_eq!(code, 0);
        assert_eq!(v["verdicts"]["n"], 2);
        assert_eq!(v["verdicts"]["rigor"], "BoxSearched");
    }
}

#[test]
fn results_do_not_depend_on_threads() {
    let args = ["mc-stability", "-c", "-4,-12", "-L", "8", "-T", "20000", "--seed", "7"];
    let runs: Vec<Value> = ["1", "4"]
        .iter()
        .map(|k| {
            let mut a = vec!["--threads", k];
            a.extend_from_slice(&args);
            strip_timings(json_report(&a).1)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn human_output_is_readable() {
    let out = quadsemi(&["construct-prefix", "-c", "-12,-21,-4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ThreeLetter prefix"), "{text}");
    let out = quadsemi(&["curve-points", "--coeffs", "1,0,-1", "--bound", "1000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(-1, 0)") && text.contains("(1, 0)"));
}
