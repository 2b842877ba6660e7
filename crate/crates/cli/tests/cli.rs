//! End-to-end contracts of the `vacua` binary: exit codes, output
//! schemas, and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn vacua(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vacua"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    name.to_string()
}

#[test]
fn count_rigid_matches_divisor_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(&["count-rigid", "--L", "10", "--out", "c.json"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let json = read_json(&dir.path().join("c.json"));
    assert_eq!(json["count"], 87);
}

#[test]
fn count_rigid_emits_single_vacuum_at_level_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(
        &[
            "count-rigid",
            "--L",
            "1",
            "--emit-vacua",
            "v.csv",
            "--out",
            "c.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("v.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "a1,a2,b1,b2,det,re_tau,im_tau,re_tau_red,im_tau_red"
    );
    assert_eq!(lines[1], "1,0,0,1,1,0,1,0,1");
}

#[test]
fn count_rigid_rejects_level_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(&["count-rigid", "--L", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_reports_missing_file_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(&["density", "--yukawa", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope.json"), "stderr: {stderr}");
}

#[test]
fn density_rejects_duplicate_triples() {
    let dir = tempfile::tempdir().unwrap();
    let name = write_file(
        dir.path(),
        "dup.json",
        r#"{"h21": 2, "entries": [
            {"ijk": [1,1,2], "re": 1.0, "im": 0.0},
            {"ijk": [2,1,1], "re": 2.0, "im": 0.0}
        ]}"#,
    );
    let out = vacua(&["density", "--yukawa", &name], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("duplicate"), "stderr: {stderr}");
}

#[test]
fn density_rejects_out_of_range_index() {
    let dir = tempfile::tempdir().unwrap();
    let name = write_file(
        dir.path(),
        "oob.json",
        r#"{"h21": 1, "entries": [{"ijk": [1,1,2], "re": 1.0, "im": 0.0}]}"#,
    );
    let out = vacua(&["density", "--yukawa", &name], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn density_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let name = write_file(
        dir.path(),
        "f1.json",
        r#"{"h21": 1, "entries": [{"ijk": [1,1,1], "re": 1.0, "im": 0.0}]}"#,
    );
    let args = [
        "density",
        "--yukawa",
        &name,
        "--samples",
        "50000",
        "--seed",
        "7",
        "--compare-closed",
    ];
    let mut full_a = args.to_vec();
    full_a.extend(["--out", "a.json"]);
    let mut full_b = args.to_vec();
    full_b.extend(["--out", "b.json"]);
    assert!(vacua(&full_a, dir.path()).status.success());
    assert!(vacua(&full_b, dir.path()).status.success());
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "density outputs must be byte-identical");
}

#[test]
fn density_ball_form_carries_tag() {
    let dir = tempfile::tempdir().unwrap();
    let name = write_file(dir.path(), "f0.json", r#"{"h21": 1, "entries": []}"#);
    let out = vacua(
        &[
            "density",
            "--yukawa",
            &name,
            "--samples",
            "50000",
            "--form",
            "ball",
            "--out",
            "d.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let json = read_json(&dir.path().join("d.json"));
    assert_eq!(json["estimate"]["form"], "ball");
    assert!(json["estimate"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn project_outputs_rows_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(
        &[
            "project",
            "--body",
            "euclid2",
            "--f",
            "const",
            "--t",
            "10:400:20",
            "--out",
            "s.csv",
            "--summary",
            "s.json",
            "--no-timestamp",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let data_rows = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .count();
    assert_eq!(data_rows, 20);
    let json = read_json(&dir.path().join("s.json"));
    assert!(json["slope"].is_f64());
    assert!(json["envelope_slope"].is_f64());
}

#[test]
fn project_no_timestamp_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (csv, json) in [("a.csv", "a.json"), ("b.csv", "b.json")] {
        let out = vacua(
            &[
                "project",
                "--body",
                "euclid2",
                "--f",
                "cos",
                "--t",
                "5:80:12",
                "--out",
                csv,
                "--summary",
                json,
                "--no-timestamp",
            ],
            dir.path(),
        );
        assert!(out.status.success(), "{out:?}");
    }
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.path().join("a.json")).unwrap(),
        std::fs::read(dir.path().join("b.json")).unwrap()
    );
}

#[test]
fn project_hemisphere_envelope_in_clustering_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(
        &[
            "project",
            "--body",
            "euclid2",
            "--f",
            "hemisphere",
            "--t",
            "20:400:40",
            "--out",
            "h.csv",
            "--summary",
            "h.json",
            "--no-timestamp",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let json = read_json(&dir.path().join("h.json"));
    let slope = json["envelope_slope"].as_f64().unwrap();
    assert!((0.8..=1.2).contains(&slope), "envelope {slope}");
}

#[test]
fn project_reads_body_files_and_reports_missing_ones() {
    let dir = tempfile::tempdir().unwrap();
    let name = write_file(
        dir.path(),
        "ellipse.json",
        r#"{"dimension": 2, "gram": [[4.0, 0.0], [0.0, 1.0]]}"#,
    );
    let out = vacua(
        &[
            "project",
            "--body",
            &name,
            "--f",
            "const",
            "--t",
            "5:60:10",
            "--out",
            "e.csv",
            "--summary",
            "e.json",
            "--no-timestamp",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");

    let out = vacua(
        &[
            "project",
            "--body",
            "missing-body.json",
            "--f",
            "const",
            "--t",
            "5:60:10",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("missing-body.json"), "stderr: {stderr}");
}

#[test]
fn geometry_reports_spectrum_and_residual() {
    let dir = tempfile::tempdir().unwrap();
    let name = write_file(
        dir.path(),
        "f1.json",
        r#"{"h21": 1, "entries": [{"ijk": [1,1,1], "re": 1.0, "im": 0.0}]}"#,
    );
    let out = vacua(
        &["geometry", "--yukawa", &name, "--out", "g.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let json = read_json(&dir.path().join("g.json"));
    assert_eq!(json["lambda_eigenvalues"][0], 3.0);
    assert_eq!(json["hodge_metric"]["re"][0][0], 3.0);
    assert!(json["hodge_identity_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn census_is_calibrated() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(
        &[
            "census",
            "--L",
            "300",
            "--samples",
            "200000",
            "--out",
            "c.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let json = read_json(&dir.path().join("c.json"));
    let ratio = json["ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "census ratio {ratio}");
    assert_eq!(json["normalization"], 2.0);
}

#[test]
fn histogram_json_has_fraction_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = vacua(
        &[
            "count-rigid",
            "--L",
            "200",
            "--histogram",
            "h.json",
            "--t-max",
            "4",
            "--nx",
            "3",
            "--ny",
            "3",
            "--out",
            "c.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let json = read_json(&dir.path().join("h.json"));
    let bins = json["bins"].as_array().unwrap();
    assert_eq!(bins.len(), 9);
    let area_total: f64 = bins.iter().map(|b| b["area"].as_f64().unwrap()).sum();
    assert!((area_total - json["total_area"].as_f64().unwrap()).abs() < 1e-9);
}
