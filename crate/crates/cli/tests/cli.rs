use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tilesys::format::read_patch;

fn tilesys(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilesys")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn generate_pinwheel_level_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["generate", "pinwheel:1,2", "L", "3", "--out", "p.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["tiles"], 125);
    assert_eq!(v["area"]["coeffs"][0], serde_json::json!([125, 1]));
    let (_, patch) = read_patch(&std::fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
    assert_eq!(patch.len(), 125);
}

#[test]
fn generate_fibonacci_word() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["generate", "fibonacci", "T1", "1", "--out", "f.json"]);
    assert_eq!(o.status.code(), Some(0));
    let (sys, patch) = read_patch(&std::fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    let mut lengths: Vec<f64> = patch.tiles.iter().map(|t| sys.measure(t.proto).to_f64()).collect();
    lengths.sort_by(f64::total_cmp);
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    assert_eq!(lengths.len(), 2);
    assert!((lengths[0] - 1.0).abs() < 1e-12 && (lengths[1] - tau).abs() < 1e-12, "{lengths:?}");
}

#[test]
fn negative_level_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(tilesys(dir.path(), &["generate", "penrose", "0", "-1"]).status.code(), Some(1));
    assert_eq!(tilesys(dir.path(), &["generate", "penrose", "0", "--level=-1"]).status.code(), Some(1));
    assert_eq!(tilesys(dir.path(), &["frobnicate"]).status.code(), Some(1));
}

#[test]
fn tile_cap_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["generate", "pinwheel:1,2", "L", "3", "--cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn render_is_deterministic_and_draws_marks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(tilesys(d, &["generate", "penrose", "thin+", "0", "--out", "t.json"]).status.success());
    assert!(tilesys(d, &["render", "t.json", "--out", "a.svg"]).status.success());
    assert!(tilesys(d, &["render", "t.json", "--out", "b.svg"]).status.success());
    let a = std::fs::read_to_string(d.join("a.svg")).unwrap();
    assert_eq!(a, std::fs::read_to_string(d.join("b.svg")).unwrap());
    assert_eq!(a.matches("<path").count(), 1);
    assert_eq!(a.matches("<line").count(), 1);

    assert!(tilesys(d, &["generate", "square", "0", "0", "--out", "s.json"]).status.success());
    assert!(tilesys(d, &["render", "s.json", "--out", "s.svg"]).status.success());
    let s = std::fs::read_to_string(d.join("s.svg")).unwrap();
    assert_eq!((s.matches("<path").count(), s.matches("<line").count()), (1, 0));
}

#[test]
fn malformed_patch_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.json"), "{\"format\": \"tilesys-patch/1\"").unwrap();
    assert_eq!(tilesys(d, &["render", "bad.json", "--out", "x.svg"]).status.code(), Some(2));

    // Two copies of the same tile overlap.
    assert!(tilesys(d, &["generate", "square", "0", "1", "--out", "s.json"]).status.success());
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    let first = v["tiles"][0].clone();
    v["tiles"].as_array_mut().unwrap().push(first);
    v.as_object_mut().unwrap().remove("provenance");
    std::fs::write(d.join("dup.json"), v.to_string()).unwrap();
    let o = tilesys(d, &["render", "dup.json", "--out", "x.svg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("overlap"));
}

#[test]
fn validate_catalog_system() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["validate", "pinwheel:1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["valid"], true);
}

#[test]
fn metric_of_equal_patches_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(tilesys(d, &["generate", "pinwheel:1,2", "L", "2", "--out", "a.json"]).status.success());
    let o = tilesys(d, &["analyze", "metric", "a.json", "a.json", "--R", "3", "--eps", "1e-6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!((v["lo"].as_f64(), v["hi"].as_f64()), (Some(0.0), Some(0.0)));
}

#[test]
fn group_comparison_reports_index_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["analyze", "group", "pinwheel:1,2", "--compare", "pinwheel:3,4", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["relation"]["relation"], "index");
    assert_eq!(v["relation"]["n"], 2);
    assert_eq!(v["relation"]["equal"], false);
    assert_eq!(v["abstract_type"], serde_json::json!([4, 1]));
}

#[test]
fn recognize_pinwheel_finds_a_radius() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["analyze", "recognize", "pinwheel:1,2", "--level", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &stdout_json(&o)["report"]["radius"];
    assert!(r["hi"].as_f64().unwrap().is_finite());
}

#[test]
fn periodic_control_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilesys(dir.path(), &["analyze", "recognize", "square", "--level", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout_json(&o)["report"]["radius"].is_null());
}

#[test]
fn patches_and_admissibility() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = tilesys(d, &["analyze", "patches", "fibonacci", "-r", "0.4", "--level", "6", "--compare-next"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["report"]["count"], 5);
    assert_eq!(v["stable"], true);

    assert!(tilesys(d, &["generate", "fibonacci", "T0", "5", "--out", "w.json"]).status.success());
    let o = tilesys(d, &["analyze", "admissible", "w.json", "-r", "0.4", "--level", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["report"]["admissible"], true);
}

#[test]
fn predecessors_and_code_and_periods_emit_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = tilesys(d, &["analyze", "predecessors", "fibonacci", "--level", "5", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let rows = stdout_json(&o)["prototiles"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["nested"] == true));

    let o = tilesys(d, &["analyze", "code", "fibonacci", "--level", "6", "--samples", "40", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["report"]["monotone"], true);

    let o = tilesys(d, &["analyze", "periods", "square", "--level", "2", "--out", "per.json"]);
    assert_eq!(o.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(d.join("per.json")).unwrap()).unwrap();
    assert_eq!(saved, stdout_json(&o));
}
