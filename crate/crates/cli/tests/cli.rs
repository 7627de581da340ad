use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_feclab"))
}

fn ensembles() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../ensembles")
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn feclab");
    assert!(out.status.success(), "feclab {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn run_json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

fn build_code(dir: &Path, method: &str, clusters: usize, seed: u64) -> PathBuf {
    let code = dir.join(format!("code_{method}_{clusters}_{seed}.json"));
    let ens = ensembles().join("tldpc_d1.json");
    run_ok(&[
        "construct",
        "--ensemble",
        ens.to_str().unwrap(),
        "--method",
        method,
        "--clusters",
        &clusters.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        code.to_str().unwrap(),
    ]);
    code
}

#[test]
fn analyze_structured_instance() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_code(dir.path(), "structured", 625, 11);
    let ens = ensembles().join("tldpc_d1.json");
    let report = run_json(&["analyze-g", "--code", code.to_str().unwrap(), "--ensemble", ens.to_str().unwrap()]);
    assert_eq!(report["verdict"], "PASS");
    assert_eq!(report["edges"], 500);
    assert_eq!(report["clusters"], 625);
    assert!((report["average_degree"].as_f64().unwrap() - 1.6).abs() < 1e-12);
    assert_eq!(report["forest"], true);
}

#[test]
fn simulate_emits_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_code(dir.path(), "random", 40, 2);
    let csv_path = dir.path().join("res.csv");
    run_ok(&[
        "simulate",
        "--code",
        code.to_str().unwrap(),
        "--channel",
        "awgn",
        "--ebn0",
        "-0.8:0.1:0.0",
        "--max-frames",
        "3",
        "--max-iters",
        "4",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["ebn0_db", "p", "frames", "frame_errors", "bit_errors", "wer", "ber", "avg_iters", "ci_wer"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    let ebn0: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    for (i, v) in ebn0.iter().enumerate() {
        assert!((v - (-0.8 + 0.1 * i as f64)).abs() < 1e-9);
    }
    assert!(rows.iter().all(|r| &r[2] == "3"));
}

#[test]
fn simulate_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_code(dir.path(), "random", 30, 5);
    let args = |seed: &str| {
        run_ok(&[
            "simulate",
            "--code",
            code.to_str().unwrap(),
            "--channel",
            "bec",
            "--p",
            "0.5:0.1:0.7",
            "--max-frames",
            "64",
            "--seed",
            seed,
        ])
    };
    assert_eq!(args("4"), args("4"));
}

/// Minimum distance by checking every word against the alist matrix.
fn brute_dmin(alist: &str) -> usize {
    let mut lines = alist.lines();
    let dims: Vec<usize> = lines.next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    let (n, m) = (dims[0], dims[1]);
    let mut lines = lines.skip(3 + n);
    let rows: Vec<u32> = (0..m)
        .map(|_| {
            lines
                .next()
                .unwrap()
                .split_whitespace()
                .map(|t| t.parse::<usize>().unwrap())
                .filter(|&c| c > 0)
                .fold(0u32, |acc, c| acc | 1 << (c - 1))
        })
        .collect();
    (1u32..1 << n)
        .filter(|w| rows.iter().all(|r| (r & w).count_ones() % 2 == 0))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

#[test]
fn dmin_brute_matches_exhaustive_search() {
    let dir = tempfile::tempdir().unwrap();
    let ens = dir.path().join("ens.json");
    std::fs::write(
        &ens,
        r#"{"lambda": {"1": "1/3", "2": "1/3", "3": "1/3"}, "base": {"kind": "block-tldpc"}}"#,
    )
    .unwrap();
    for seed in 0..3u64 {
        let code = dir.path().join(format!("c{seed}.json"));
        let alist = dir.path().join(format!("c{seed}.alist"));
        run_ok(&[
            "construct",
            "--ensemble",
            ens.to_str().unwrap(),
            "--method",
            "random",
            "--clusters",
            "6",
            "--seed",
            &seed.to_string(),
            "--out",
            code.to_str().unwrap(),
            "--alist",
            alist.to_str().unwrap(),
        ]);
        let out = run_json(&["dmin-brute", "--code", code.to_str().unwrap()]);
        assert!(out["n"].as_u64().unwrap() <= 24);
        let expected = brute_dmin(&std::fs::read_to_string(&alist).unwrap());
        assert_eq!(out["dmin"].as_u64().unwrap() as usize, expected, "seed {seed}");
    }
}

#[test]
fn threshold_exit_and_optimize() {
    let ens = ensembles().join("ldpc_rate_tenth.json");
    let t = run_json(&["threshold", "--ensemble", ens.to_str().unwrap()]);
    assert!((t["threshold"].as_f64().unwrap() - 0.8933).abs() < 3e-3);
    let e = run_json(&["exit", "--ensemble", ens.to_str().unwrap(), "--p", "0.6", "--samples", "201"]);
    assert_eq!(e["variable_curve"].as_array().unwrap().len(), 201);
    let (num, closed) = (e["delta_area"].as_f64().unwrap(), e["delta_area_closed_form"].as_f64().unwrap());
    assert!((num - closed).abs() < 2e-3);
    let o = run_json(&["optimize", "--base", "block", "--p", "0.85", "--max-degree", "10"]);
    assert!(o["threshold"].as_f64().unwrap() >= 0.849);
}

#[test]
fn decode_reads_llr_csv() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_code(dir.path(), "random", 20, 1);
    let n = serde_json::from_str::<Value>(&std::fs::read_to_string(&code).unwrap()).unwrap()["n"]
        .as_u64()
        .unwrap() as usize;
    let mut llrs: Vec<String> = vec!["4.5".into(); n];
    llrs[0] = "0".into();
    llrs[1] = "inf".into();
    let path = dir.path().join("llrs.csv");
    std::fs::write(&path, llrs.join(",\n")).unwrap();
    let out = run_json(&["decode", "--code", code.to_str().unwrap(), "--llrs", path.to_str().unwrap()]);
    assert_eq!(out["converged"], true);
    assert_eq!(out["hard_decisions"].as_array().unwrap().len(), n);
}

#[test]
fn precondition_failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let code = build_code(dir.path(), "random", 20, 1);
    let missing = dir.path().join("nope.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["dmin-brute", "--code", code.to_str().unwrap()],
        vec!["threshold", "--ensemble", missing.to_str().unwrap()],
        vec!["simulate", "--code", code.to_str().unwrap(), "--channel", "bec", "--p", "1.5"],
        vec!["simulate", "--code", code.to_str().unwrap(), "--channel", "awgn"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let status = bin().args(&args).output().unwrap().status;
        assert!(!status.success(), "{args:?} should fail");
    }
    let llr = dir.path().join("short.csv");
    std::fs::write(&llr, "1.0,2.0").unwrap();
    let status =
        bin().args(["decode", "--code", code.to_str().unwrap(), "--llrs", llr.to_str().unwrap()]).output().unwrap();
    assert!(!status.status.success());
}

#[test]
fn sweep_and_llr_parsing() {
    assert_eq!(feclab_cli::parse_sweep("0.5").unwrap(), vec![0.5]);
    assert_eq!(feclab_cli::parse_sweep("0.1:0.1:0.3").unwrap(), vec![0.1, 0.2, 0.3]);
    assert!(feclab_cli::parse_sweep("1:0:2").is_err());
    assert!(feclab_cli::parse_sweep("2:1:1").is_err());
    let llrs = feclab_cli::parse_llrs("1.5, -inf\n0\ninf\n").unwrap();
    assert_eq!(llrs[..3], [1.5, f64::NEG_INFINITY, 0.0]);
    assert_eq!(llrs[3], f64::INFINITY);
    assert!(feclab_cli::parse_llrs("abc").is_err());
}
