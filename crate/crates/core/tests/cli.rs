use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use ras_isac::scenario::output::{metadata_path, ResultDocument, CSV_HEADER};
use ras_isac::scenario::{RunMetadata, ScenarioConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ras-isac"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_config_prints_resolved_defaults() {
    let o = run(&["validate-config"]);
    assert_eq!(code(&o), 0);
    let printed: ScenarioConfig = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(printed, ScenarioConfig::default().resolved().unwrap());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("unknown.json", r#"{"bogus": 1}"#),
        ("nested.json", r#"{"carrier": {"freq": 1}}"#),
        ("empty_array.json", r#"{"array": {"rows": 0}}"#),
        ("bad_lambda.json", r#"{"carrier": {"wavelength_m": 0.2}}"#),
        ("syntax.json", "{"),
    ] {
        let p = write(dir.path(), name, text);
        let o = run(&["validate-config", "--config", &p]);
        assert_eq!(code(&o), 2, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
    let o = run(&["sweep-azimuth", "--config", "/no/such/config.json"]);
    assert_ne!(code(&o), 0);
}

#[test]
fn capacity_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ex.json", r#"{"optimizer": {"method": "exhaustive"}}"#);
    let o = run(&["optimize", "--config", &p]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("alternating"));
}

#[test]
fn degenerate_channel_exits_3() {
    // array turned to face +y while the user sits at negative y
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "behind.json",
        r#"{"array": {"rotation_mode": "array_level", "array_rotation": {"zenith": 1.5707963267948966, "azimuth": 0.0}},
            "azimuth_sweep": {"start_rad": -1.5, "stop_rad": -1.4, "step_rad": 0.1}}"#,
    );
    let o = run(&["sweep-azimuth", "--config", &p, "--scheme", "fixed"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unwritable_output_exits_1_and_names_path() {
    let o = run(&["sweep-azimuth", "--scheme", "fixed", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn azimuth_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("az.csv");
    let json = dir.path().join("az.json");
    let o = run(&["sweep-azimuth", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["sweep-azimuth", "--out", json.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let body: Vec<&str> = lines.collect();
    // 25 azimuths by 3 schemes
    assert_eq!(body.len(), 75);

    let doc: ResultDocument = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc.rows.len(), body.len());
    for (line, row) in body.iter().zip(&doc.rows) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[2], row.scheme.as_str());
        let v: f64 = f[4].parse().unwrap();
        assert!((v - row.value_db).abs() <= 1e-7 * row.value_db.abs());
    }

    let meta: RunMetadata = serde_json::from_str(&std::fs::read_to_string(metadata_path(&csv)).unwrap()).unwrap();
    assert_eq!(meta, doc.metadata);
    assert_eq!(meta.root_seed, 2025);
}

#[test]
fn stdout_output_and_seed_override() {
    let a = run(&["sweep-azimuth", "--scheme", "ras", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",9,0")));
}

#[test]
fn power_sweep_rows_include_means() {
    let o = run(&["sweep-power", "--runs", "2", "--scheme", "fixed"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    // 7 powers by (2 runs + mean)
    assert_eq!(rows.len(), 21);
    assert_eq!(rows.iter().filter(|l| l.ends_with(",mean")).count(), 7);
}

#[test]
fn optimize_reports_json() {
    let o = run(&["optimize", "--seed", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["orientations"].as_array().unwrap().len(), 16);
    let trace = v["trace"].as_array().unwrap();
    assert!(trace.windows(2).all(|w| w[1].as_f64() >= w[0].as_f64()));
}

#[test]
fn oracle_check_passes() {
    let o = run(&["oracle-check"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

fn schema_defaults(schema: &Value) -> Value {
    match schema.get("properties") {
        Some(Value::Object(props)) => {
            Value::Object(props.iter().map(|(k, v)| (k.clone(), schema_defaults(v))).collect())
        }
        _ => schema["default"].clone(),
    }
}

fn assert_leaves_documented(schema: &Value, path: &str) {
    match schema.get("properties") {
        Some(Value::Object(props)) => {
            assert_eq!(schema["additionalProperties"], Value::Bool(false), "{path}");
            for (k, v) in props {
                assert_leaves_documented(v, &format!("{path}.{k}"));
            }
        }
        _ => {
            for key in ["type", "default", "description", "default_source"] {
                assert!(schema.get(key).is_some(), "{path} lacks {key}");
            }
        }
    }
}

#[test]
fn schema_matches_default_config() {
    let schema: Value =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/scenario.schema.json")))
            .unwrap();
    assert_leaves_documented(&schema, "");
    let mut expected = serde_json::to_value(ScenarioConfig::default().resolved().unwrap()).unwrap();
    // spacing defaults to half a wavelength when unset
    expected["array"]["spacing_m"] = Value::Null;
    assert_eq!(schema_defaults(&schema), expected);
}
