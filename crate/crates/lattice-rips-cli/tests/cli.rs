//! End-to-end checks of the command-line surface: exit codes, wire formats,
//! tampered-certificate handling, and the no-floats rule for reports.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_lattice-rips")
}

fn temp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("lattice-rips-cli-{}-{name}", std::process::id()));
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().unwrap()
}

/// Every number in a report must be an exact integer; rationals travel as
/// strings.
fn assert_no_floats(value: &serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            assert!(n.is_i64() || n.is_u64(), "float in report: {n}");
        }
        serde_json::Value::Array(items) => items.iter().for_each(assert_no_floats),
        serde_json::Value::Object(map) => map.values().for_each(assert_no_floats),
        _ => {}
    }
}

fn crush_cube(path: &PathBuf) {
    let status = Command::new(binary())
        .args(["crush", "--dim", "2", "--range", "0..3", "--scale", "2"])
        .arg("--output")
        .arg(path)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn crush_then_verify_roundtrip() {
    let cert = temp("roundtrip.json");
    crush_cube(&cert);
    let report_path = temp("roundtrip-report.json");
    let out = Command::new(binary())
        .arg("verify")
        .arg(&cert)
        .arg("--output")
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["valid"], true);
    assert_eq!(report["failing_step"], serde_json::Value::Null);
    assert_eq!(report["reason"], serde_json::Value::Null);
    assert_eq!(report["steps_checked"], 15);
    assert_no_floats(&report);
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let a = temp("det-a.json");
    let b = temp("det-b.json");
    crush_cube(&a);
    crush_cube(&b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn tampered_witness_is_reported_at_its_step() {
    let cert = temp("tamper.json");
    crush_cube(&cert);
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    // Replace the witness of step 3 with a far-away grid point.
    value["steps"][3]["witness"] = serde_json::json!([[3, 3]]);
    fs::write(&cert, serde_json::to_string(&value).unwrap()).unwrap();
    let report_path = temp("tamper-report.json");
    let out = Command::new(binary())
        .arg("verify")
        .arg(&cert)
        .arg("--output")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["valid"], false);
    assert_eq!(report["failing_step"], 3);
}

#[test]
fn swapped_steps_violate_the_order() {
    let cert = temp("swap.json");
    crush_cube(&cert);
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    let steps = value["steps"].as_array_mut().unwrap();
    steps.swap(0, 1);
    fs::write(&cert, serde_json::to_string(&value).unwrap()).unwrap();
    let out = Command::new(binary()).arg("verify").arg(&cert).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("INVALID"), "stdout: {text}");
}

#[test]
fn schema_violations_are_usage_errors() {
    let cert = temp("schema.json");
    crush_cube(&cert);
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    value["unexpected"] = serde_json::json!(1);
    fs::write(&cert, serde_json::to_string(&value).unwrap()).unwrap();
    let out = Command::new(binary()).arg("verify").arg(&cert).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    fs::write(&cert, "not json").unwrap();
    let out = Command::new(binary()).arg("verify").arg(&cert).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stuck_reduction_exits_one_with_a_failure_report() {
    let report_path = temp("stuck.json");
    let out = Command::new(binary())
        .args(["crush", "--dim", "2", "--range", "0..3", "--scale", "1/2"])
        .arg("--output")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["stuck"]["step_index"], 0);
    assert_eq!(report["stuck"]["point"], serde_json::json!([0, 0]));
    assert_no_floats(&report);
}

#[test]
fn witness_subcommand_reads_point_files() {
    let input = temp("points.txt");
    fs::write(&input, "# dim=3\n0 0 0\n3 0 0\n0 3 0\n0 0 3\n").unwrap();
    let out = Command::new(binary())
        .args(["witness", "--anchor", "0,0,0", "--scale", "3", "--max-size", "1", "--json"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["found"], false);
    assert_no_floats(&report);

    // The same anchor in a richer cloud is dominated.
    fs::write(&input, "# dim=2\n0 0\n1 1\n2 2\n").unwrap();
    let out = Command::new(binary())
        .args(["witness", "--anchor", "0,0", "--scale", "2", "--json"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["found"], true);
    assert_eq!(report["witness"], serde_json::json!([[1, 1]]));
    assert_eq!(report["mode"], "dominated");
}

#[test]
fn homology_subcommand_reports_exact_betti() {
    let out = run(&[
        "homology", "--dim", "2", "--range", "0..1", "--scale", "1", "--k-max", "2", "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["reduced_betti"], serde_json::json!([0, 1]));
    assert_eq!(report["simplex_counts"], serde_json::json!([4, 4, 0]));
    assert_no_floats(&report);
}

#[test]
fn homology_resource_cap_is_exit_two() {
    let out = Command::new(binary())
        .args([
            "homology", "--dim", "2", "--range", "0..3", "--scale", "2", "--k-max", "4",
            "--max-simplices", "10", "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("resource limit"), "stderr: {err}");
}

#[test]
fn jung_subcommand_single_set() {
    let input = temp("jung.txt");
    fs::write(&input, "1 0\n0 1\n").unwrap();
    let out = Command::new(binary())
        .args(["jung", "--json"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["radius"], "1");
    assert_eq!(report["diameter"], "2");
    assert_eq!(report["ratio"], "1/2");
    assert_eq!(report["within_bound"], true);
    assert_no_floats(&report);
}

#[test]
fn lec_subcommand_modes() {
    let input = temp("tau.txt");
    fs::write(&input, "0 0\n3 0\n").unwrap();
    // Infeasible at redundancy 2: exit 1.
    let out = Command::new(binary())
        .args(["lec", "--rho", "2", "--json"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["holds"], false);

    // Construction at kappa = 2/3 yields the half-scaled center.
    let out = Command::new(binary())
        .args(["lec", "--kappa", "2/3", "--json"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["center"], serde_json::json!(["3/4", "0"]));
    assert_eq!(report["rho"], "1/2");
    assert_no_floats(&report);

    // Randomized constructive trials.
    let out = run(&["lec", "--trials", "25", "--dim", "3", "--seed", "5", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["failures"], 0);
    assert_eq!(report["rho"], "1/3");
}

#[test]
fn cases_subcommand_table_and_exit_codes() {
    let out = run(&["cases", "--dim", "1", "--scale", "1", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["total"], 2);
    assert_eq!(report["witnessed"], 1);
    assert_eq!(report["terminal"], 1);
    assert_no_floats(&report);

    // Scale below the dimension: stuck rows, exit 1.
    let out = run(&["cases", "--dim", "2", "--scale", "1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["stuck"].as_u64().unwrap() > 0);

    // Fractional scale is a usage error for the case analysis.
    let out = run(&["cases", "--dim", "2", "--scale", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_subcommand_reports_integer_times() {
    let out = run(&[
        "bench", "--dim", "2", "--scale", "2", "--from", "2", "--to", "4", "--repeat", "1",
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_no_floats(&report);
    assert_eq!(report["runs"].as_array().unwrap().len(), 3);
    assert!(report["linearity_ratio"].is_string());
}

#[test]
fn d2_metric_is_supported_for_crushing() {
    // Euclidean scale sqrt(2) cannot be written exactly, but squared
    // comparisons make scale 3/2 meaningful: diagonal neighbors are within
    // it.
    let out = run(&[
        "crush", "--dim", "2", "--range", "0..4", "--scale", "3/2", "--metric", "d2", "--json",
    ]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["grid"]["metric"], "d2");
    assert_eq!(cert["grid"]["scale_num"], 3);
    assert_eq!(cert["grid"]["scale_den"], 2);
}
