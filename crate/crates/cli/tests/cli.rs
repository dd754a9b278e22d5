//! End-to-end checks of the command-line surface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn repsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("repsym-cli-test-{}-{name}", std::process::id()));
    p
}

fn k3_file() -> PathBuf {
    let path = tmp("k3.txt");
    std::fs::write(&path, "3 3\n0 1\n1 2\n0 2\n").unwrap();
    path
}

#[test]
fn classify_reports_boundary_point() {
    let out = repsym(&["classify", "--d", "2", "--p", "0.1", "--r", "0.25"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: Boundary"), "{stdout}");
}

#[test]
fn classify_breaking_with_graph_file() {
    let graph = k3_file();
    let out = repsym(&[
        "classify",
        "--d",
        "2",
        "--p",
        "0.05",
        "--r",
        "0.3",
        "--graph",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: SymmetryBreaking"), "{stdout}");
    assert!(stdout.contains("witness_epsilon"), "{stdout}");
}

#[test]
fn usage_errors_exit_two() {
    let out = repsym(&["classify", "--d", "2", "--p", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = repsym(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one() {
    // r < p violates the upper-tail precondition.
    let out = repsym(&["classify", "--d", "2", "--p", "0.5", "--r", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn boundary_csv_peaks_near_half() {
    let path = tmp("boundary.csv");
    let out = repsym(&[
        "boundary",
        "--d",
        "2",
        "--grid",
        "100",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "r,p_critical,gamma");
    let mut best = (0.0f64, 0.0f64);
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let r: f64 = cols[0].parse().unwrap();
        let p: f64 = cols[1].parse().unwrap();
        assert_eq!(cols[2], "2");
        if p > best.1 {
            best = (r, p);
        }
    }
    assert!((best.0 - 0.5).abs() < 0.02, "peak at r = {}", best.0);
    assert!((best.1 - 0.1192).abs() < 1e-3, "peak p = {}", best.1);
}

#[test]
fn minorant_csv_has_four_columns() {
    let path = tmp("minorant.csv");
    let out = repsym(&[
        "minorant",
        "--p",
        "0.05",
        "--gamma",
        "2",
        "--grid",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x,curve,minorant,tangent");
    for line in lines {
        assert_eq!(line.split(',').count(), 4);
    }
}

#[test]
fn witness_report_is_written() {
    let graph = k3_file();
    let path = tmp("witness.txt");
    let out = repsym(&[
        "witness",
        "--p",
        "0.05",
        "--r",
        "0.3",
        "--graph",
        graph.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = std::fs::read_to_string(&path).unwrap();
    assert!(report.starts_with("3\n"));
    for key in ["epsilon,", "r1,", "r2,", "s,", "t_value,", "target_t,", "hp_value,", "target_hp,"]
    {
        assert!(report.contains(key), "missing {key} in report");
    }
}

#[test]
fn spectral_classify_prints_certificate() {
    let out = repsym(&["spectral-classify", "--p", "0.05", "--r", "0.3"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("operator_norm:"), "{stdout}");
}

#[test]
fn erg_commands_round_trip() {
    let graph = k3_file();
    let out = repsym(&[
        "erg-classify",
        "--graph",
        graph.to_str().unwrap(),
        "--alpha",
        "1",
        "--beta1",
        "-1",
        "--beta2",
        "0.5",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("kind: SymmetricUnique"), "{stdout}");

    let path = tmp("phase.csv");
    let out = repsym(&[
        "erg-phase",
        "--graph",
        graph.to_str().unwrap(),
        "--alpha",
        "0.5",
        "--b1grid",
        "-4:-1:4",
        "--b2grid",
        "0.5:3:6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("beta1,beta2,kind,u_star,u_star2\n"));
    assert_eq!(csv.lines().count(), 1 + 4 * 6);

    let path = tmp("traj.csv");
    let out = repsym(&[
        "erg-trajectory",
        "--beta1",
        "-2",
        "--gamma",
        "3",
        "--b2grid",
        "0:3:20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("beta2,u_star\n"));
}

#[test]
fn sample_erg_is_seed_reproducible() {
    let a = tmp("runa.csv");
    let b = tmp("runb.csv");
    for path in [&a, &b] {
        let out = repsym(&[
            "sample-erg",
            "--n",
            "12",
            "--alpha",
            "1",
            "--beta1",
            "-1",
            "--beta2",
            "0.5",
            "--steps",
            "20000",
            "--seed",
            "42",
            "--burn-in",
            "5000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let csv_a = std::fs::read(&a).unwrap();
    let csv_b = std::fs::read(&b).unwrap();
    assert_eq!(csv_a, csv_b, "trajectories must be byte-identical for equal seeds");
    let meta = std::fs::read_to_string(a.with_extension("csv.meta")).unwrap();
    assert!(meta.contains("\"seed\": 42"), "{meta}");
}

#[test]
fn hyper_commands() {
    let out = repsym(&["hyper-classify", "--d", "2", "--k", "3", "--p", "0.05", "--r", "0.3"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: SymmetryBreaking"), "{stdout}");

    let path = tmp("hyperwitness.txt");
    let out = repsym(&[
        "hyper-witness",
        "--p",
        "0.1",
        "--r",
        "0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = std::fs::read_to_string(&path).unwrap();
    assert!(report.starts_with("3 3\n"), "{report}");
    assert!(report.contains("t_value,"));
}

#[test]
fn verify_suites_pass() {
    for suite in ["gt", "nesting"] {
        let out = repsym(&["verify", "--suite", suite]);
        assert!(out.status.success(), "suite {suite} failed");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("PASS"), "{stdout}");
    }
    let out = repsym(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn svg_outputs_render() {
    let path = tmp("plot.svg");
    let out = repsym(&[
        "minorant",
        "--p",
        "0.05",
        "--gamma",
        "2",
        "--grid",
        "50",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("polyline"));
    assert!(svg.trim_end().ends_with("</svg>"));
}
