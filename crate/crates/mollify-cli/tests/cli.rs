//! End-to-end tests of the `mollify` binary: command wiring, report files,
//! exit codes, and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn mollify(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mollify"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn generate_then_estimate_recovers_the_cusp_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let out = mollify(
        dir.path(),
        &["generate", "cusp", "--alpha", "0.5", "--n", "65536", "-o", "cusp.sig"],
    );
    assert_exit(&out, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("label=cusp(0.5)"));
    assert!(dir.path().join("cusp.sig").exists());
    assert!(dir.path().join("cusp.sig.bin").exists());

    let out = mollify(
        dir.path(),
        &[
            "estimate",
            "cusp.sig",
            "--k",
            "1",
            "--window",
            "-0.25,0.25",
            "-o",
            "report.json",
        ],
    );
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("alpha = 0.4"), "stdout: {stdout}");
    assert!(stdout.contains("k=1"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    let alpha = report["alpha"].as_f64().unwrap();
    assert!((alpha - 0.5).abs() < 0.05);
    assert_eq!(report["config"]["kernel"], "gauss");
    assert_eq!(report["config"]["n"], 65536);
    assert_eq!(report["kernel"]["family"], "gauss_poly");
    // plot-data sidecar
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("log_n,log_sup\n"));
    assert_eq!(csv.lines().count(), 1 + report["scales"].as_array().unwrap().len());
}

#[test]
fn reports_reproduce_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(
            dir.path(),
            &["generate", "delta", "--order", "0", "--n", "16384", "-o", "d.sig"],
        ),
        0,
    );
    let args = [
        "estimate", "d.sig", "--k", "0", "--n-max", "256", "--window", "-0.25,0.25", "-o",
        "r.json",
    ];
    assert_exit(&mollify(dir.path(), &args), 0);
    let first = std::fs::read(dir.path().join("r.json")).unwrap();
    assert_exit(&mollify(dir.path(), &args), 0);
    let second = std::fs::read(dir.path().join("r.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn smooth_fixtures_exit_with_saturation_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(dir.path(), &["generate", "bump", "-o", "bump.sig"]),
        0,
    );
    // defaults throughout, as a user would run it
    let out = mollify(dir.path(), &["estimate", "bump.sig", "--k", "2"]);
    assert_exit(&out, 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("raise k"));

    // every probe order saturating is the same signal
    let out = mollify(
        dir.path(),
        &[
            "estimate", "bump.sig", "--k-list", "1,2", "--window", "-0.25,0.25",
        ],
    );
    assert_exit(&out, 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("raise k"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(&mollify(dir.path(), &["estimate"]), 2);
    assert_exit(&mollify(dir.path(), &["generate", "nonsense", "-o", "x"]), 2);
    assert_exit(
        &mollify(dir.path(), &["estimate", "x.sig", "--k", "1", "--kernel", "box"]),
        2,
    );
}

#[test]
fn computation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(dir.path(), &["estimate", "missing.sig", "--k", "1"]),
        1,
    );
    std::fs::write(dir.path().join("broken.sig"), "not json\n").unwrap();
    let out = mollify(dir.path(), &["estimate", "broken.sig", "--k", "1"]);
    assert_exit(&out, 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("format error"));
}

#[test]
fn csv_signals_round_trip_through_the_tools() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(
            dir.path(),
            &[
                "generate", "heaviside", "--n", "16384", "--format", "csv", "-o", "h.sig",
            ],
        ),
        0,
    );
    assert!(!dir.path().join("h.sig.bin").exists());
    let out = mollify(
        dir.path(),
        &[
            "estimate", "h.sig", "--k", "1", "--n-max", "256", "--window", "-0.25,0.25",
        ],
    );
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("alpha = 0.0") || stdout.contains("alpha = -0.0"), "{stdout}");
}

#[test]
fn k_list_prints_spread() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(
            dir.path(),
            &["generate", "delta", "--n", "16384", "-o", "d.sig"],
        ),
        0,
    );
    let out = mollify(
        dir.path(),
        &[
            "estimate", "d.sig", "--k-list", "0,1,2", "--n-max", "256", "--window",
            "-0.25,0.25", "-o", "d.json",
        ],
    );
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("spread = 0.0"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.json")).unwrap())
            .unwrap();
    assert_eq!(report["estimates"].as_array().unwrap().len(), 3);
}

#[test]
fn lp_command_measures_the_point_mass() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(
            dir.path(),
            &["generate", "delta", "--n", "16384", "-o", "d.sig"],
        ),
        0,
    );
    let out = mollify(
        dir.path(),
        &["lp", "d.sig", "--window", "-0.25,0.25", "-o", "lp.json"],
    );
    assert_exit(&out, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("alpha = -1.0"));
    let csv = std::fs::read_to_string(dir.path().join("lp.csv")).unwrap();
    assert!(csv.starts_with("j,sup_norm\n"));
}

#[test]
fn rate_command_reflects_vanishing_moments() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(
            dir.path(),
            &["generate", "delta", "--n", "16384", "-o", "d.sig"],
        ),
        0,
    );
    let out = mollify(
        dir.path(),
        &["rate", "d.sig", "--kernel", "vanish:3", "--n-max", "32"],
    );
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("b = 4.0") || stdout.starts_with("b = 3.9"), "{stdout}");
}

#[test]
fn smooth_command_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    assert_exit(
        &mollify(
            dir.path(),
            &["generate", "bump", "--n", "16384", "-o", "bump.sig"],
        ),
        0,
    );
    let out = mollify(
        dir.path(),
        &[
            "smooth", "bump.sig", "--k-max", "4", "--n-max", "256", "--window", "-0.25,0.25",
        ],
    );
    assert_exit(&out, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict = smooth"));
}

#[test]
fn suite_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = mollify(dir.path(), &["suite", "--out", "report"]);
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "{stdout}");
    assert!(dir.path().join("report/crossval.csv").exists());
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("report/suite.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["checks"]["pass"], true);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 10);
}
