use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn heffter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heffter"))
        .args(args)
        .env_remove("HEFFTER_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

const SHAPE: [&str; 12] = ["--m", "5", "--n", "10", "--s", "8", "--k", "4", "--lambda", "8", "--t", "5"];

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv"] {
        let file = dir.path().join(format!("out.{format}"));
        let file = file.to_str().unwrap();
        let mut args = vec!["construct", "heffter", "--format", format, "-o", file];
        args.extend(SHAPE);
        assert_eq!(code(&heffter(&args)), 0);
        let out = heffter(&["verify", "heffter", "--s", "8", "--k", "4", "--lambda", "8", "--t", "5", file]);
        assert_eq!(code(&out), 0, "{format}");
        assert_eq!(stdout(&out).trim(), "ok");
    }
}

#[test]
fn constructed_json_matches_the_stored_array() {
    let mut args = vec!["construct", "heffter"];
    args.extend(SHAPE);
    let out = heffter(&args);
    assert_eq!(code(&out), 0);
    let built: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let stored: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("h8_t5_5x10.json")).unwrap()).unwrap();
    assert_eq!(built, stored);
}

#[test]
fn output_is_deterministic() {
    let args = ["construct", "sma", "--m", "15", "--n", "9", "--s", "6", "--k", "10", "--format", "csv"];
    let (a, b) = (heffter(&args), heffter(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn magic_rectangle_csv_has_constant_sums() {
    let out = heffter(&["construct", "mr", "--m", "5", "--n", "10", "--s", "8", "--k", "4", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let sum: i64 = row.split(',').filter(|f| !f.is_empty()).map(|f| f.parse::<i64>().unwrap()).sum();
        assert_eq!(sum, 156);
    }
}

#[test]
fn verify_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_heffter"))
        .args(["verify", "sma", "--s", "8", "--k", "4", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read(fixture("sma_5x10.json")).unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    assert!(child.wait_with_output().unwrap().status.success());
}

#[test]
fn failed_verification_exits_two_with_a_certificate() {
    let out = heffter(&["verify", "sma", "--s", "8", "--k", "4", "--json", &fixture("h8_t5_5x10.json")]);
    assert_eq!(code(&out), 2);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["ok"], false);
    assert_eq!(cert["violations"][0]["clause"], "entries");
}

#[test]
fn shape_mismatch_fails_verification() {
    let out = heffter(&["verify", "mr", "--s", "8", "--k", "4", "--m", "6", &fixture("mr_5x10.json")]);
    assert_ne!(code(&out), 0);
}

#[test]
fn exit_codes() {
    // Open residue class.
    let out = heffter(&["construct", "heffter", "--m", "9", "--n", "9", "--s", "6", "--k", "6", "--lambda", "2", "--t", "1"]);
    assert_eq!(code(&out), 3);
    // Provably absent.
    let out = heffter(&["search", "sma", "--m", "2", "--n", "2", "--s", "2", "--k", "2"]);
    assert_eq!(code(&out), 3);
    // Budget too small to decide.
    let out = heffter(&["search", "sma", "--m", "6", "--n", "6", "--s", "6", "--k", "6", "--budget", "5"]);
    assert_eq!(code(&out), 4);
    // Usage errors.
    assert_eq!(code(&heffter(&["construct", "cube", "--m", "4"])), 64);
    assert_eq!(code(&heffter(&["construct", "heffter", "--m", "5", "--n", "10", "--s", "8", "--k", "4"])), 64);
    assert_eq!(code(&heffter(&["search", "mr", "--m", "4", "--n", "4", "--s", "4", "--k", "4"])), 64);
    assert_eq!(code(&heffter(&["--help"])), 0);
    // I/O failure.
    assert_eq!(code(&heffter(&["verify", "sma", "--s", "8", "--k", "4", "/no/such/file"])), 1);
}

#[test]
fn budget_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_heffter"))
        .args(["search", "sma", "--m", "6", "--n", "6", "--s", "6", "--k", "6"])
        .env("HEFFTER_ORACLE_BUDGET", "5,1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
    let out = Command::new(env!("CARGO_BIN_EXE_heffter"))
        .args(["search", "sma", "--m", "4", "--n", "4", "--s", "4", "--k", "4"])
        .env("HEFFTER_ORACLE_BUDGET", "not a budget")
        .output()
        .unwrap();
    assert_eq!(code(&out), 64);
}

#[test]
fn search_finds_small_arrays() {
    let out = heffter(&["search", "sma", "--m", "3", "--n", "3", "--s", "3", "--k", "3", "--format", "pretty"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 3);
}

#[test]
fn sweep_reports_counts() {
    let out = heffter(&["sweep", "sma", "--max-m", "8", "--max-n", "8", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("object,tuples,passed,failed,unsupported,exhausted"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[0], "sma");
    assert_eq!(fields[1], fields[2]);
    assert_eq!(fields[3], "0");
    let out = heffter(&["sweep", "heffter", "--max-m", "8", "--max-n", "8", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["failed"], 0);
    assert!(report["passed"].as_u64().unwrap() > 0);
}

#[test]
fn dump_blocks_describes_the_plan() {
    let out = heffter(&["dump-blocks", "heffter", "--m", "6", "--n", "12", "--s", "8", "--k", "4", "--lambda", "1", "--t", "24"]);
    assert_eq!(code(&out), 0);
    let plan: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(plan["offsets"].as_array().unwrap().len(), 12);
    let out = heffter(&["dump-blocks", "heffter", "--m", "18", "--n", "15", "--s", "10", "--k", "12", "--lambda", "6", "--t", "20"]);
    assert_eq!(code(&out), 0);
}
