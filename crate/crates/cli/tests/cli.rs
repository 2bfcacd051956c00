//! End-to-end checks of the binary: exit codes, JSON round trips, and
//! byte-identical reruns.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn t2conv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_t2conv"))
        .args(args)
        .env("T2CONV_SEED", "7")
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("t2conv-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_triangle() -> PathBuf {
    let p = tmp("tri.json");
    fs::write(
        &p,
        r#"{"breakpoints":[0.0,0.5,1.0],"point_values":[0.0,1.0,0.0],
            "segments":[{"left_val":0.0,"right_val":1.0},{"left_val":1.0,"right_val":0.0}]}"#,
    )
    .unwrap();
    p
}

fn write_trapezoid() -> PathBuf {
    let p = tmp("trap.json");
    fs::write(
        &p,
        r#"{"breakpoints":[0.0,0.25,0.5,0.75,1.0],
            "point_values":[0.0,1.0,1.0,0.0,0.0],
            "segments":[{"left_val":0.0,"right_val":1.0},{"left_val":1.0,"right_val":1.0},
                        {"left_val":1.0,"right_val":0.0},{"left_val":0.0,"right_val":0.0}]}"#,
    )
    .unwrap();
    p
}

#[test]
fn eval_reports_value() {
    let tri = write_triangle();
    let out = t2conv(&["eval", "--f", tri.to_str().unwrap(), "--x", "0.25"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], 0.5);
}

#[test]
fn convolve_emits_json_and_csv_that_round_trip() {
    let tri = write_triangle();
    let trap = write_trapezoid();
    let fam_path = tmp("fam.json");
    let csv_path = tmp("fam.csv");
    let out = t2conv(&[
        "convolve",
        "--f",
        tri.to_str().unwrap(),
        "--g",
        trap.to_str().unwrap(),
        "--star",
        "product",
        "--tri",
        "drastic",
        "--m",
        "128",
        "--out",
        fam_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // The emitted JSON parses back through the reader unchanged.
    let text = fs::read_to_string(&fam_path).unwrap();
    let fam: t2conv_core::CutFamily = serde_json::from_str(&text).unwrap();
    assert_eq!(fam.levels(), 128);
    assert_eq!(serde_json::to_string_pretty(&fam).unwrap(), text);
    let csv = fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("alpha,lo,hi\n"));
    assert_eq!(csv.lines().count(), 129);

    // plot-data accepts the emitted family.
    let prefix = tmp("plot").to_str().unwrap().to_string();
    let out = t2conv(&[
        "plot-data",
        "--f",
        tri.to_str().unwrap(),
        "--cuts",
        fam_path.to_str().unwrap(),
        "--n",
        "64",
        "--out-prefix",
        &prefix,
    ]);
    assert!(out.status.success());
    let fn_csv = fs::read_to_string(format!("{prefix}_fn.csv")).unwrap();
    assert_eq!(fn_csv.lines().count(), 66); // header + 65 samples
}

#[test]
fn meet_output_feeds_order() {
    let tri = write_triangle();
    let trap = write_trapezoid();
    let meet_path = tmp("meet.json");
    let out = t2conv(&[
        "meet",
        "--f",
        tri.to_str().unwrap(),
        "--g",
        trap.to_str().unwrap(),
        "--out",
        meet_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = t2conv(&[
        "order",
        "--f",
        meet_path.to_str().unwrap(),
        "--g",
        trap.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // The meet is below both arguments, and the two procedures agree.
    assert_eq!(v["f_leq_g"], true);
    assert_eq!(v["cutwise_f_leq_g"], true);
    assert_eq!(v["f_leq_g"], v["cutwise_f_leq_g"]);
    assert_eq!(v["g_leq_f"], v["cutwise_g_leq_f"]);
}

#[test]
fn check_axioms_passes_hypothesis_pair() {
    let out = t2conv(&[
        "check-axioms",
        "--star",
        "product",
        "--tri",
        "drastic",
        "--trials",
        "6",
        "--m",
        "32",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(reports.iter().all(|r| r["failures"] == 0));
}

#[test]
fn check_axioms_flags_nilpotent_minimum_with_exit_1() {
    let out = t2conv(&[
        "check-axioms",
        "--star",
        "min",
        "--tri",
        "nilpotent_minimum",
        "--trials",
        "2",
        "--m",
        "32",
        "--n",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["law"], "closure_usc");
    assert!(reports[0]["failures"].as_u64().unwrap() >= 1);
}

#[test]
fn check_tr_passes_and_demo_rejects_right_continuous() {
    let out = t2conv(&[
        "check-tr",
        "--star",
        "min",
        "--tri",
        "min",
        "--trials",
        "10",
    ]);
    assert!(out.status.success());

    let out = t2conv(&["demo-necessity", "--tri", "drastic", "--case", "case1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_necessity_emits_frozen_witness() {
    let out = t2conv(&["demo-necessity", "--tri", "nilpotent_minimum", "--case", "case2"]);
    assert!(out.status.success());
    let w: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(w["gap"], 0.5);
    assert!((w["point"].as_f64().unwrap() - 37.0 / 60.0).abs() < 1e-12);
}

#[test]
fn same_config_and_seed_give_identical_bytes() {
    let run = || {
        let out = t2conv(&[
            "check-axioms",
            "--star",
            "lukasiewicz",
            "--tri",
            "product",
            "--trials",
            "5",
            "--m",
            "32",
            "--seed",
            "99",
        ]);
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn bad_inputs_exit_2() {
    let missing = t2conv(&["eval", "--f", "/nonexistent.json", "--x", "0.5"]);
    assert_eq!(missing.status.code(), Some(2));

    let bad = tmp("bad.json");
    fs::write(&bad, r#"{"breakpoints": [0.0], "point_values": [0.0], "segments": []}"#).unwrap();
    let out = t2conv(&["eval", "--f", bad.to_str().unwrap(), "--x", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("breakpoints"), "message names the field: {msg}");

    let out = t2conv(&[
        "convolve",
        "--f",
        bad.to_str().unwrap(),
        "--g",
        bad.to_str().unwrap(),
        "--star",
        "frobnicate",
        "--tri",
        "min",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ordinal_sum_spec_file_loads() {
    let spec = tmp("ordinal.json");
    fs::write(
        &spec,
        r#"{"kind":"ordinal_sum","summands":[{"lo":0.25,"hi":0.5,"inner":"product"}]}"#,
    )
    .unwrap();
    let tri = write_triangle();
    let out = t2conv(&[
        "convolve",
        "--f",
        tri.to_str().unwrap(),
        "--g",
        tri.to_str().unwrap(),
        "--star",
        spec.to_str().unwrap(),
        "--tri",
        "min",
        "--m",
        "32",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
