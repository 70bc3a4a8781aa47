use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use vpt::series::cache::{CacheDocument, CACHE_DIR_ENV};
use vpt::BwSeries;

fn vpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpt"))
        .args(args)
        .env_remove(CACHE_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn vpt_with_cache_env(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpt"))
        .args(args)
        .env(CACHE_DIR_ENV, dir)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = vpt(&full);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON from {args:?}: {e}\n{}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), value)
}

fn column(doc: &Value, name: &str) -> Vec<String> {
    doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[name].as_str().unwrap().to_string())
        .collect()
}

fn schema_validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn coeffs_quartic_rows() {
    let (code, doc) = json(&["coeffs", "--p", "4", "--order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(column(&doc, "coefficient"), ["1/2", "3/4", "-21/8"]);
    assert_eq!(column(&doc, "l"), ["0", "1", "2"]);
}

#[test]
fn coeffs_order_zero_is_one_row() {
    let (code, doc) = json(&["coeffs", "--p", "4", "--order", "0"]);
    assert_eq!(code, 0);
    assert_eq!(column(&doc, "coefficient"), ["1/2"]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["coeffs", "--p", "5", "--order", "2"],
        vec!["coeffs", "--p", "2", "--order", "2"],
        vec!["coeffs", "--p", "4"],
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "0", "--order", "1",
        ],
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "1/0", "--order", "1",
        ],
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", "0",
        ],
        vec!["verify", "--p", "7", "--max-order", "3"],
        vec!["frobnicate"],
    ] {
        let out = vpt(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = vpt(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("converge"));
}

#[test]
fn polynomial_first_and_zeroth_order() {
    let (_, doc) = json(&["polynomial", "--p", "4", "--order", "1"]);
    assert_eq!(doc["summary"]["polynomial"], "σ/4 - 3/2");
    assert_eq!(doc["summary"]["degree"], "1");
    let roots: Vec<&Value> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["item"] == "root")
        .collect();
    assert_eq!(roots.len(), 1);
    assert_eq!(roots[0]["exact"], "6");

    let (_, doc) = json(&["polynomial", "--p", "4", "--order", "0"]);
    assert_eq!(doc["summary"]["polynomial"], "1/2");
    assert_eq!(doc["summary"]["real_root_count"], "0");
}

#[test]
fn every_command_matches_the_schema() {
    let validator = schema_validator();
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["coeffs", "--p", "6", "--order", "5"],
        vec!["polynomial", "--p", "4", "--order", "7"],
        vec!["polynomial", "--p", "4", "--order", "0"],
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", "4",
        ],
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", "3", "--oracle",
        ],
        vec![
            "converge",
            "--p",
            "6",
            "--omega",
            "1",
            "--g",
            "1/2",
            "--max-order",
            "4",
        ],
        vec!["verify", "--p", "4", "--max-order", "4", "--cache", cache],
    ];
    for args in runs {
        let (_, doc) = json(&args);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:#?}");
    }
    let (_, mut doc) = json(&["coeffs", "--p", "4", "--order", "1"]);
    doc["rows"][0]["coefficient"] = Value::String("0.5".into());
    assert!(
        !validator.is_valid(&doc),
        "decimal in an exact column must be rejected"
    );
}

#[test]
fn solve_first_order_anchor() {
    let (code, doc) = json(&[
        "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(column(&doc, "sigma_exact"), ["6"]);
    assert_eq!(column(&doc, "omega_trial_exact"), ["2"]);
    assert_eq!(column(&doc, "energy_exact"), ["13/16"]);
    let energy: f64 = doc["summary"]["energy"].as_str().unwrap().parse().unwrap();
    assert_eq!(energy, 0.8125);
    assert_eq!(doc["summary"]["kind"], "extremum");
}

#[test]
fn solve_higher_order_beats_lower_order() {
    let error = |order: &str| -> f64 {
        let (code, doc) = json(&[
            "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", order, "--oracle",
        ]);
        assert_eq!(code, 0);
        assert_eq!(doc["summary"]["oracle_agrees"], "true");
        doc["summary"]["abs_error"]
            .as_str()
            .unwrap()
            .parse()
            .unwrap()
    };
    let e1 = error("1");
    let e9 = error("9");
    let e15 = error("15");
    assert!(e9 < e1);
    assert!(e15 < e9, "{e15} vs {e9}");
}

#[test]
fn candidates_sorted_by_flatness() {
    for order in ["6", "15", "16"] {
        let (_, doc) = json(&[
            "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", order,
        ]);
        let flat: Vec<f64> = column(&doc, "flatness")
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert!(
            flat.windows(2).all(|w| w[0] <= w[1]),
            "order {order}: {flat:?}"
        );
        assert_eq!(column(&doc, "rank")[0], "0");
    }
}

#[test]
fn rational_inputs_are_exact() {
    let (_, doc) = json(&[
        "solve", "--p", "4", "--omega", "3/4", "--g", "0.1", "--order", "1",
    ]);
    assert_eq!(doc["params"]["omega"], "3/4");
    assert_eq!(doc["params"]["g"], "1/10");
    let (_, doc) = json(&[
        "solve", "--p", "4", "--omega", "1.0", "--g", "2.5e-1", "--order", "1",
    ]);
    assert_eq!(doc["params"]["g"], "1/4");
}

#[test]
fn identical_runs_are_bit_identical() {
    for args in [
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "10", "--order", "11", "--format", "json",
        ],
        vec![
            "converge",
            "--p",
            "4",
            "--omega",
            "1",
            "--g",
            "1",
            "--max-order",
            "9",
            "--format",
            "csv",
        ],
        vec![
            "polynomial",
            "--p",
            "8",
            "--order",
            "9",
            "--format",
            "plain",
        ],
    ] {
        let a = vpt(&args);
        let b = vpt(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn csv_and_json_carry_the_same_strings() {
    for base in [
        vec!["coeffs", "--p", "4", "--order", "6"],
        vec!["polynomial", "--p", "6", "--order", "5"],
        vec![
            "solve", "--p", "4", "--omega", "1", "--g", "1", "--order", "7",
        ],
        vec![
            "converge",
            "--p",
            "4",
            "--omega",
            "2",
            "--g",
            "10",
            "--max-order",
            "5",
        ],
    ] {
        let (_, doc) = json(&base);
        let mut args = base.clone();
        args.extend(["--format", "csv"]);
        let out = vpt(&args);
        let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        let columns: Vec<String> = doc["columns"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_string())
            .collect();
        assert_eq!(header, columns);
        let rows: Vec<Vec<String>> = reader
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        let json_rows: Vec<Vec<String>> = doc["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                columns
                    .iter()
                    .map(|c| r[c].as_str().unwrap().to_string())
                    .collect()
            })
            .collect();
        assert_eq!(rows, json_rows, "{base:?}");
    }
}

#[test]
fn verify_general_even_powers() {
    for p in ["4", "10"] {
        let (code, doc) = json(&["verify", "--p", p, "--max-order", "12"]);
        assert_eq!(code, 0, "p = {p}");
        assert_eq!(doc["status"], "pass");
        assert_eq!(doc["summary"]["failures"], "0");
    }
}

#[test]
fn coeffs_populates_the_cache_and_verify_accepts_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = vpt_with_cache_env(&["coeffs", "--p", "4", "--order", "8"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let file = dir.path().join("bw-p4-level0-v1.json");
    assert!(file.exists());
    let out = vpt_with_cache_env(&["verify", "--p", "4", "--max-order", "6"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let again = vpt_with_cache_env(&["coeffs", "--p", "4", "--order", "8"], dir.path());
    assert_eq!(
        again.stdout,
        vpt(&["coeffs", "--p", "4", "--order", "8"]).stdout
    );
}

#[test]
fn corrupted_cache_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    assert_eq!(
        vpt(&["coeffs", "--p", "4", "--order", "5", "--cache", cache])
            .status
            .code(),
        Some(0)
    );
    let file = dir.path().join("bw-p4-level0-v1.json");

    let text = std::fs::read_to_string(&file).unwrap();
    std::fs::write(&file, text.replace("333/16", "334/16")).unwrap();
    let out = vpt(&[
        "verify",
        "--p",
        "4",
        "--max-order",
        "4",
        "--cache",
        cache,
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "fail");
    let cache_row = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "cache")
        .unwrap();
    assert!(cache_row["detail"].as_str().unwrap().contains("checksum"));

    // A consistent checksum over wrong numbers is caught by regeneration.
    let forged: BwSeries = serde_json::from_str(
        r#"{"p":4,"level":0,"coeffs":["1/2","3/4","-21/8","333/16","-30885/128","1"]}"#,
    )
    .unwrap();
    let doc = CacheDocument::from_series(&forged);
    std::fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = vpt(&["verify", "--p", "4", "--max-order", "4", "--cache", cache]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(&file, "not json").unwrap();
    let out = vpt(&["verify", "--p", "4", "--max-order", "4", "--cache", cache]);
    assert_eq!(out.status.code(), Some(1));

    // Regular commands repair the file.
    assert_eq!(
        vpt(&["coeffs", "--p", "4", "--order", "5", "--cache", cache])
            .status
            .code(),
        Some(0)
    );
    let out = vpt(&["verify", "--p", "4", "--max-order", "4", "--cache", cache]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn converge_reports_rows_and_strict_mode() {
    let (code, doc) = json(&[
        "converge",
        "--p",
        "4",
        "--omega",
        "1",
        "--g",
        "1",
        "--max-order",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    let first: f64 = doc["rows"][0]["energy"].as_str().unwrap().parse().unwrap();
    assert_eq!(first, 0.8125);
    assert_eq!(doc["summary"]["oracle_agrees"], "true");

    // The odd-order error grows from N = 5 to N = 7 at this coupling.
    let args = [
        "converge",
        "--p",
        "4",
        "--omega",
        "1",
        "--g",
        "1",
        "--max-order",
        "7",
    ];
    let (code, doc) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["odd_error_increase"], "5->7");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(vpt(&strict).status.code(), Some(1));
}

#[test]
fn unconverged_oracle_is_a_failure() {
    let out = vpt(&[
        "converge",
        "--p",
        "6",
        "--omega",
        "1",
        "--g",
        "10",
        "--max-order",
        "2",
        "--basis-dim",
        "16",
        "--max-basis-dim",
        "32",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = vpt(&[
        "converge",
        "--p",
        "6",
        "--omega",
        "1",
        "--g",
        "10",
        "--max-order",
        "2",
        "--basis-dim",
        "16",
        "--max-basis-dim",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
