//! End-to-end checks of the `wiretap` binary: output schemas, determinism,
//! and exit codes (0 success, 1 check failure, 2 usage, 3 I/O).

use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use wiretap_toolkit::linalg::{tensor, CMatrix, DensityOperator};
use wiretap_toolkit::states::{save_channel, WiretapChannel};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wiretap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("wiretap-cli-{}-{name}", std::process::id()));
    p
}

/// Bob sees |x⟩⟨x|, Eve sees I/2: nothing leaks.
fn non_leaking_channel_file(name: &str) -> PathBuf {
    let eve = DensityOperator::maximally_mixed(2);
    let outputs = (0..2)
        .map(|x| {
            let bob = DensityOperator::from_matrix(CMatrix::from_fn(2, |i, j| {
                if i == x && j == x {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }))
            .unwrap();
            DensityOperator::from_matrix(tensor(bob.op(), eve.op()).matrix().clone()).unwrap()
        })
        .collect();
    let ch = WiretapChannel::new(vec!["0".into(), "1".into()], 2, 2, outputs, None).unwrap();
    let path = temp_path(name);
    save_channel(&ch, &path).unwrap();
    path
}

fn parse_csv_rows(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,normal_approx,asymptote,capacity"),
        "header row"
    );
    lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect()
}

#[test]
fn bpsk_single_row() {
    let out = run(&[
        "bpsk", "--eta", "0.9", "--nbar", "0.5", "--n-min", "100", "--n-max", "100", "--points",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv_rows(&stdout_text(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 100.0);
}

#[test]
fn bpsk_balanced_beamsplitter_has_zero_asymptote() {
    let out = run(&[
        "bpsk", "--eta", "0.5", "--nbar", "0.5", "--n-min", "100", "--n-max", "1000", "--points",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv_rows(&stdout_text(&out));
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row[2], 0.0, "asymptote column");
        assert_eq!(row[3], 0.0, "capacity column");
    }
}

#[test]
fn bpsk_curve_is_monotone_toward_the_asymptote() {
    let out = run(&[
        "bpsk",
        "--eta",
        "0.9",
        "--nbar",
        "0.5",
        "--n-min",
        "1000",
        "--n-max",
        "10000000",
        "--points",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = parse_csv_rows(&stdout_text(&out));
    assert_eq!(rows.len(), 9);
    let asymptote = rows[0][2];
    for w in rows.windows(2) {
        assert!(w[1][1] > w[0][1], "rate must increase with n");
    }
    for row in &rows {
        assert!(row[1] <= asymptote, "rate must stay below the asymptote");
        assert!(asymptote <= row[3], "asymptote must stay below capacity");
    }
    let first_gap = asymptote - rows[0][1];
    let last_gap = asymptote - rows[rows.len() - 1][1];
    assert!(last_gap < first_gap, "gap must shrink along the grid");
}

#[test]
fn bpsk_rejects_bad_grids_and_paths() {
    let cases: &[&[&str]] = &[
        &["bpsk", "--eta", "0.9", "--nbar", "0.5", "--n-min", "0"],
        &[
            "bpsk", "--eta", "0.9", "--nbar", "0.5", "--n-min", "200", "--n-max", "100",
        ],
        &[
            "bpsk", "--eta", "0.9", "--nbar", "0.5", "--n-min", "100", "--n-max", "200",
            "--points", "1",
        ],
        &["bpsk", "--eta", "1.5", "--nbar", "0.5"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
    let out = run(&[
        "bpsk", "--eta", "0.9", "--nbar", "0.5", "--n-min", "5", "--n-max", "5", "--points", "1",
        "--out", "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bound_non_leaking_channel_has_zero_eve_term() {
    let path = non_leaking_channel_file("eve0.wtc.json");
    let out = run(&[
        "bound",
        "--channel",
        path.to_str().unwrap(),
        "--mode",
        "private",
        "--eps1",
        "0.1",
        "--eps2",
        "0.04",
        "--eta1",
        "0.04",
        "--eta2",
        "0.1",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], serde_json::Value::Bool(true));
    let eve_term = report["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["name"] == "eve_max_info")
        .expect("eve term present");
    assert!(eve_term["value_bits"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn bound_output_is_byte_identical_across_runs() {
    let path = non_leaking_channel_file("det.wtc.json");
    let args = [
        "bound",
        "--channel",
        path.to_str().unwrap(),
        "--mode",
        "second-order",
        "--n",
        "4096",
        "--p-x",
        "0.25,0.75",
    ];
    let a = run(&args);
    let b = run(&args);
    std::fs::remove_file(&path).ok();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same inputs must give identical bytes");
}

#[test]
fn bound_second_order_reports_the_noiseless_rate() {
    let path = non_leaking_channel_file("so.wtc.json");
    let out = run(&[
        "bound",
        "--channel",
        path.to_str().unwrap(),
        "--mode",
        "second-order",
        "--n",
        "10000",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Orthogonal Bob outputs carry exactly one noiseless bit; Eve sees
    // nothing, so every dispersion term vanishes.
    assert!((report["rate_bits"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let names: Vec<&str> = report["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        ["mutual_information_difference", "bob_dispersion", "eve_dispersion"]
    );
}

#[test]
fn bound_usage_and_io_failures() {
    let path = non_leaking_channel_file("usage.wtc.json");
    let p = path.to_str().unwrap();
    let usage_cases: &[&[&str]] = &[
        &["bound", "--channel", p, "--mode", "private", "--eta2", "0.1"],
        &["bound", "--channel", p, "--mode", "private", "--eta1", "0.04"],
        &["bound", "--channel", p, "--mode", "second-order"],
        &["bound", "--channel", p, "--mode", "public"],
        &[
            "bound", "--channel", p, "--mode", "public", "--eta1", "0.005", "--p-x", "0.5,abc",
        ],
    ];
    for args in usage_cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
    let out = run(&[
        "bound",
        "--channel",
        "/nonexistent/ch.wtc.json",
        "--mode",
        "second-order",
        "--n",
        "100",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_reports_counts_and_echoes_the_seed() {
    let out = run(&["verify", "--suite", "hn", "--trials", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_text(&out);
    assert!(text.contains("5/5 checks passed"), "got: {text}");
    assert!(text.contains("seed 7"), "got: {text}");
}

#[test]
fn verify_seed_comes_from_the_environment_unless_overridden() {
    let out = bin()
        .args(["verify", "--suite", "metrics", "--trials", "2"])
        .env("TOOLKIT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_text(&out).contains("seed 123"));

    let out = bin()
        .args(["verify", "--suite", "metrics", "--trials", "2", "--seed", "9"])
        .env("TOOLKIT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_text(&out).contains("seed 9"));

    let out = bin()
        .args(["verify", "--suite", "metrics", "--trials", "2"])
        .env("TOOLKIT_SEED", "not-a-seed")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_usage_errors() {
    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--suite", "np", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
