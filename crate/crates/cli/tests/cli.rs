//! End-to-end tests that drive the compiled `abstain` binary through its
//! subcommands and check artifacts, stdout, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn abstain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abstain"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_code(out: &Output, expected: i32) {
    assert_eq!(
        out.status.code(),
        Some(expected),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        stderr(out)
    );
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn help_and_version_exit_zero() {
    assert_code(&abstain(&["--help"]), 0);
    assert_code(&abstain(&["--version"]), 0);
    assert_code(&abstain(&["calibrate", "--help"]), 0);
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_code(&abstain(&["spiral", "--bogus"]), 1);
    assert_code(&abstain(&["frobnicate"]), 1);
}

#[test]
fn spiral_writes_all_artifacts_and_echoes_quantile_points() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("plots");
    let out = abstain(&["spiral", "--out-dir", out_dir.to_str().unwrap()]);
    assert_code(&out, 0);

    for name in [
        "histogram.svg",
        "region_plain.svg",
        "region_exp_i.svg",
        "region_exp_ii.svg",
        "region_exp_iii.svg",
    ] {
        let path = out_dir.join(name);
        assert!(path.is_file(), "{name} missing");
        let svg = read(&path);
        assert!(svg.starts_with("<svg"), "{name} is not an svg document");
    }

    let text = stdout(&out);
    assert!(text.contains("experiment (i): test 1 points (2.5%, 97.5%), test 2 points (2.5%, 97.5%)"));
    assert!(text.contains("experiment (ii): test 1 points (5%, 97.5%), test 2 points (2.5%, 95%)"));
    assert!(text.contains("experiment (iii): test 1 points (5%, 99%), test 2 points (1%, 95%)"));
}

#[test]
fn spiral_default_experiment_i_map_shows_all_four_colors() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("plots");
    assert_code(&abstain(&["spiral", "--out-dir", out_dir.to_str().unwrap()]), 0);
    let svg = read(&out_dir.join("region_exp_i.svg"));
    for color in ["#1f77b4", "#d62728", "#ff7f0e", "#7f7f7f"] {
        assert!(svg.contains(color), "experiment (i) map lacks color {color}");
    }
}

#[test]
fn gen_calibrate_decide_evaluate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path();
    let out_str = out_dir.to_str().unwrap();

    // Generate a labeled score dataset.
    assert_code(
        &abstain(&["gen", "--dataset", "scores", "--n", "300", "--out-dir", out_str]),
        0,
    );
    let scores_path = out_dir.join("scores.csv");
    let scores_csv = read(&scores_path);
    assert!(scores_csv.starts_with("score,label\n"));
    assert_eq!(scores_csv.lines().count(), 601, "header plus 2x300 rows");

    // Calibrate and persist a snapshot.
    let snapshot_path = out_dir.join("calib.snapshot");
    let out = abstain(&[
        "calibrate",
        "--scores",
        scores_path.to_str().unwrap(),
        "--snapshot",
        snapshot_path.to_str().unwrap(),
        "--alpha",
        "0.025",
    ]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("test 1 (2.5%, 97.5%), test 2 (2.5%, 97.5%)"));
    assert!(text.contains("self-rejection"));
    assert!(snapshot_path.is_file());
    assert!(read(&snapshot_path).starts_with("format_version 1\n"));

    // Decide against the same scores.
    let out = abstain(&[
        "decide",
        "--scores",
        scores_path.to_str().unwrap(),
        "--snapshot",
        snapshot_path.to_str().unwrap(),
        "--out-dir",
        out_str,
    ]);
    assert_code(&out, 0);
    let decisions_path = out_dir.join("decisions.csv");
    let decisions = read(&decisions_path);
    assert!(decisions.starts_with("score,label,decision\n"));
    assert_eq!(decisions.lines().count(), 601);
    for line in decisions.lines().skip(1) {
        let token = line.rsplit(',').next().unwrap();
        assert!(
            ["class1", "class2", "uncertain_overlap", "uncertain_outlier"].contains(&token),
            "unexpected decision token {token:?}"
        );
    }

    // A second run is byte-for-byte identical.
    assert_code(
        &abstain(&[
            "decide",
            "--scores",
            scores_path.to_str().unwrap(),
            "--snapshot",
            snapshot_path.to_str().unwrap(),
            "--out-dir",
            out_str,
        ]),
        0,
    );
    assert_eq!(decisions, read(&decisions_path), "decide is not idempotent");

    // Evaluate against the snapshot: header plus exactly one row.
    let out = abstain(&[
        "evaluate",
        "--scores",
        scores_path.to_str().unwrap(),
        "--snapshot",
        snapshot_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("alpha%"));
    assert!(text.contains("snap"));

    // Evaluate with a calibration sweep: default three alphas.
    let out = abstain(&[
        "evaluate",
        "--scores",
        scores_path.to_str().unwrap(),
        "--calib",
        scores_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).lines().count(), 4, "header plus three sweep rows");

    // Explicit single alpha yields a single row.
    let out = abstain(&[
        "evaluate",
        "--scores",
        scores_path.to_str().unwrap(),
        "--calib",
        scores_path.to_str().unwrap(),
        "--alpha",
        "0.05",
    ]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn decide_merge_uncertain_collapses_abstention_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path();
    let out_str = out_dir.to_str().unwrap();
    assert_code(
        &abstain(&[
            "gen",
            "--dataset",
            "scores",
            "--n",
            "200",
            "--mean1=-1.0",
            "--mean2=1.0",
            "--out-dir",
            out_str,
        ]),
        0,
    );
    let scores = out_dir.join("scores.csv");
    let snapshot = out_dir.join("calib.snapshot");
    assert_code(
        &abstain(&[
            "calibrate",
            "--scores",
            scores.to_str().unwrap(),
            "--snapshot",
            snapshot.to_str().unwrap(),
        ]),
        0,
    );
    assert_code(
        &abstain(&[
            "decide",
            "--scores",
            scores.to_str().unwrap(),
            "--snapshot",
            snapshot.to_str().unwrap(),
            "--merge-uncertain",
            "--out-dir",
            out_str,
        ]),
        0,
    );
    let decisions = read(&out_dir.join("decisions.csv"));
    assert!(!decisions.contains("uncertain_overlap"));
    assert!(!decisions.contains("uncertain_outlier"));
    assert!(decisions.contains("uncertain"), "close means should abstain somewhere");
}

#[test]
fn explicit_quantile_points_conflict_with_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let out_str = dir.path().to_str().unwrap();
    assert_code(&abstain(&["gen", "--dataset", "scores", "--out-dir", out_str]), 0);
    let scores = dir.path().join("scores.csv");
    let snapshot = dir.path().join("calib.snapshot");

    // alpha together with explicit points is rejected by the parser.
    let out = abstain(&[
        "calibrate",
        "--scores",
        scores.to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
        "--alpha",
        "0.025",
        "--q1-lo",
        "0.05",
    ]);
    assert_code(&out, 1);

    // A partial set of explicit points is also rejected.
    let out = abstain(&[
        "calibrate",
        "--scores",
        scores.to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
        "--q1-lo",
        "0.05",
    ]);
    assert_code(&out, 1);

    // The full asymmetric set works.
    let out = abstain(&[
        "calibrate",
        "--scores",
        scores.to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
        "--q1-lo",
        "0.05",
        "--q1-hi",
        "0.99",
        "--q2-lo",
        "0.01",
        "--q2-hi",
        "0.95",
    ]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("test 1 (5%, 99%), test 2 (1%, 95%)"));
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let snapshot = dir.path().join("calib.snapshot");

    // Missing input file.
    let out = abstain(&[
        "calibrate",
        "--scores",
        dir.path().join("absent.csv").to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
    ]);
    assert_code(&out, 2);

    // Malformed score value, reported with its file line number.
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "score,label\n0.5,0\nnot-a-number,1\n").unwrap();
    let out = abstain(&[
        "calibrate",
        "--scores",
        bad.to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
    ]);
    assert_code(&out, 2);
    assert!(stderr(&out).contains("row 3"), "stderr: {}", stderr(&out));

    // Single-class input cannot calibrate two regions.
    let single = dir.path().join("single.csv");
    let mut csv = String::from("score,label\n");
    for i in 0..40 {
        csv.push_str(&format!("{}.0,0\n", i));
    }
    std::fs::write(&single, csv).unwrap();
    let out = abstain(&[
        "calibrate",
        "--scores",
        single.to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
    ]);
    assert_code(&out, 2);
}

#[test]
fn evaluate_requires_a_calibration_source() {
    let dir = tempfile::tempdir().unwrap();
    let out_str = dir.path().to_str().unwrap();
    assert_code(&abstain(&["gen", "--dataset", "scores", "--out-dir", out_str]), 0);
    let scores = dir.path().join("scores.csv");
    let out = abstain(&["evaluate", "--scores", scores.to_str().unwrap()]);
    assert_code(&out, 1);
    // An alpha sweep needs --calib, not --snapshot.
    let snapshot = dir.path().join("calib.snapshot");
    assert_code(
        &abstain(&[
            "calibrate",
            "--scores",
            scores.to_str().unwrap(),
            "--snapshot",
            snapshot.to_str().unwrap(),
        ]),
        0,
    );
    let out = abstain(&[
        "evaluate",
        "--scores",
        scores.to_str().unwrap(),
        "--snapshot",
        snapshot.to_str().unwrap(),
        "--alpha",
        "0.05",
    ]);
    assert_code(&out, 1);
}

#[test]
fn gen_spiral_writes_point_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_str = dir.path().to_str().unwrap();
    assert_code(
        &abstain(&["gen", "--dataset", "spiral", "--n", "50", "--out-dir", out_str]),
        0,
    );
    let csv = read(&dir.path().join("spiral.csv"));
    assert!(csv.starts_with("x,y,label\n"));
    assert_eq!(csv.lines().count(), 101);
    assert_code(&abstain(&["gen", "--dataset", "bogus", "--out-dir", out_str]), 1);
}
