use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use declip::frames::{random_unit_frame, simplex_etf};
use declip::{Frame, Rng};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_declip"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    let s = stdout(o);
    assert_eq!(s.lines().count(), 1, "one record per line: {s}");
    serde_json::from_str(&s).unwrap()
}

fn trace_columns(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn gen_etf_has_expected_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("etf.txt");
    stdout(&run(&["gen", "--kind", "etf", "--n", "3", "--out", out.to_str().unwrap()]));
    let f = Frame::read(&out).unwrap();
    assert_eq!((f.dim(), f.len()), (3, 4));
    assert!((f.coherence().unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn gen_onb_is_identity() {
    let text = stdout(&run(&["gen", "--kind", "onb", "--n", "5"]));
    let f = Frame::from_text(&text, Path::new("<stdout>")).unwrap();
    for j in 0..5 {
        for i in 0..5 {
            assert_eq!(f.vector(j)[i], if i == j { 1.0 } else { 0.0 });
        }
    }
}

#[test]
fn gen_random_matches_golden_file() {
    let text = stdout(&run(&["gen", "--kind", "random", "--n", "10", "--m", "30", "--seed", "42"]));
    let golden = std::fs::read_to_string(fixture("random_n10_m30_seed42.txt")).unwrap();
    assert_eq!(text, golden);
    let again = stdout(&run(&["gen", "--kind", "random", "--n", "10", "--m", "30", "--seed", "42"]));
    assert_eq!(text, again);
}

#[test]
fn gen_shape_rules() {
    assert_eq!(run(&["gen", "--kind", "random", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--kind", "etf", "--n", "3", "--m", "7"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--kind", "random", "--n", "4", "--m", "2"]).status.code(), Some(3));
}

#[test]
fn usage_and_io_exit_codes() {
    assert_eq!(run(&["gen", "--kind", "onb", "--n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["lambda-c", "--frame", "/nonexistent/frame.txt", "--method", "exact"])
            .status
            .code(),
        Some(4)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "2 3\n1 0\n").unwrap();
    assert_eq!(
        run(&["lambda-c", "--frame", bad.to_str().unwrap(), "--method", "exact"])
            .status
            .code(),
        Some(4)
    );
}

fn write_frame(dir: &Path, name: &str, f: &Frame) -> String {
    let p = dir.join(name);
    f.write(&p).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn lambda_c_exact_on_etf() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_frame(dir.path(), "etf.txt", &simplex_etf(2).unwrap());
    let rec = json(&run(&["lambda-c", "--frame", &p, "--method", "exact"]));
    assert_eq!(rec["op"], "lambda_c");
    assert_eq!(rec["method"], "exact");
    let v = rec["value"].as_f64().unwrap();
    assert!((v - 0.866_025_403_784_438_6).abs() < 1e-9);
    assert_eq!(rec["certificate"]["full_spark"], true);
}

#[test]
fn lambda_c_exact_without_full_spark_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = Frame::from_vectors(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
    let p = write_frame(dir.path(), "dep.txt", &f);
    let rec = json(&run(&["lambda-c", "--frame", &p, "--method", "exact"]));
    assert_eq!(rec["value"].as_f64().unwrap(), 1.0);
    assert_eq!(rec["certificate"]["full_spark"], false);
}

#[test]
fn lambda_c_estimate_agrees_with_oracle() {
    let p = fixture("random_n2_m4_seed42.txt");
    let p = p.to_str().unwrap();
    let est = json(&run(&["lambda-c", "--frame", p, "--method", "estimate", "--restarts", "50"]));
    let orc = json(&run(&["lambda-c", "--frame", p, "--method", "oracle-n2"]));
    let e = est["estimate"].as_f64().unwrap();
    let o = orc["value"].as_f64().unwrap();
    assert!((e - o).abs() < 1e-6, "{e} vs {o}");
    let bounds = json(&run(&["lambda-c", "--frame", p, "--method", "bounds"]));
    let lo = bounds["interval"]["lower"].as_f64().unwrap();
    let hi = bounds["interval"]["upper"].as_f64().unwrap();
    assert!(lo - 1e-9 <= o && o <= hi + 1e-9);
}

#[test]
fn lambda_c_records_share_schema() {
    let p = fixture("random_n2_m4_seed42.txt");
    let p = p.to_str().unwrap();
    for method in ["bounds", "estimate", "oracle-n2"] {
        let rec = json(&run(&["lambda-c", "--frame", p, "--method", method]));
        let keys: Vec<&str> = rec.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 5, "{keys:?}");
        for k in ["op", "inputs", "method", "certificate"] {
            assert!(keys.contains(&k));
        }
        assert!(["value", "interval", "estimate"].iter().any(|k| keys.contains(k)));
    }
    let csv = stdout(&run(&["lambda-c", "--frame", p, "--method", "bounds", "--format", "csv"]));
    assert!(csv.starts_with("method,value,lower,upper\nbounds,"));
}

#[test]
fn lambda_c_method_shape_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_frame(dir.path(), "etf3.txt", &simplex_etf(3).unwrap());
    assert_eq!(run(&["lambda-c", "--frame", &p, "--method", "oracle-n2"]).status.code(), Some(3));
    let onb = write_frame(dir.path(), "onb.txt", &declip::frames::orthonormal_basis(3).unwrap());
    assert_eq!(run(&["lambda-c", "--frame", &onb, "--method", "bounds"]).status.code(), Some(3));
}

#[test]
fn recover_parseval_unsaturated_in_one_step() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = Rng::seed_from_u64(12);
    let f = random_unit_frame(3, 8, &mut rng).unwrap().canonical_parseval().unwrap();
    let frame = write_frame(dir.path(), "p.txt", &f);
    let x = [0.1, -0.2, 0.15];
    let c = f.analysis(&x).unwrap();
    let coeffs = dir.path().join("c.txt");
    std::fs::write(&coeffs, c.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ")).unwrap();
    let truth = dir.path().join("x.txt");
    std::fs::write(&truth, "0.1 -0.2 0.15\n").unwrap();
    let csv = stdout(&run(&[
        "recover", "--frame", &frame, "--coeffs", coeffs.to_str().unwrap(), "--lambda", "10",
        "--algo", "saturated", "--alpha", "1", "--beta", "1", "--iters", "3",
        "--truth", truth.to_str().unwrap(), "--format", "csv",
    ]));
    let rows = trace_columns(&csv);
    assert_eq!(rows.len(), 4);
    assert!(rows[1][1] < 1e-12, "{}", rows[1][1]);
}

#[test]
fn recover_beta_zero_is_linear_on_unsaturated() {
    let frame = fixture("random_n2_m4_seed42.txt");
    let coeffs = fixture("recover_coeffs.txt");
    let truth = fixture("recover_truth.txt");
    let common = [
        "recover", "--frame", frame.to_str().unwrap(), "--coeffs", coeffs.to_str().unwrap(),
        "--lambda", "0.47", "--iters", "30", "--truth", truth.to_str().unwrap(), "--format", "csv",
    ];
    let mut sat = common.to_vec();
    sat.extend(["--algo", "saturated", "--beta", "0"]);
    let mut lin = common.to_vec();
    lin.extend(["--algo", "linear"]);
    let a = trace_columns(&stdout(&run(&sat)));
    let b = trace_columns(&stdout(&run(&lin)));
    for (ra, rb) in a.iter().zip(&b) {
        assert!((ra[1] - rb[1]).abs() <= 1e-12, "{} vs {}", ra[1], rb[1]);
    }
}

#[test]
fn recover_golden_trace() {
    let frame = fixture("random_n2_m4_seed42.txt");
    let coeffs = fixture("recover_coeffs.txt");
    let truth = fixture("recover_truth.txt");
    let csv = stdout(&run(&[
        "recover", "--frame", frame.to_str().unwrap(), "--coeffs", coeffs.to_str().unwrap(),
        "--lambda", "0.47", "--algo", "saturated", "--iters", "30",
        "--truth", truth.to_str().unwrap(), "--format", "csv",
    ]));
    assert_eq!(csv, std::fs::read_to_string(fixture("recover_trace.csv")).unwrap());
}

#[test]
fn recover_json_record() {
    let frame = fixture("random_n2_m4_seed42.txt");
    let coeffs = fixture("recover_coeffs.txt");
    let rec = json(&run(&[
        "recover", "--frame", frame.to_str().unwrap(), "--coeffs", coeffs.to_str().unwrap(),
        "--lambda", "0.47", "--algo", "saturated", "--iters", "60",
    ]));
    assert_eq!(rec["op"], "recover");
    let sol: Vec<f64> = rec["value"]["solution"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((sol[0] - 0.3).abs() < 1e-6 && (sol[1] - 0.4).abs() < 1e-6, "{sol:?}");
}

#[test]
fn recover_error_exit_codes() {
    let frame = fixture("random_n2_m4_seed42.txt");
    let frame = frame.to_str().unwrap();
    let coeffs = fixture("recover_coeffs.txt");
    let coeffs = coeffs.to_str().unwrap();
    // Entries above the clip level.
    let o = run(&["recover", "--frame", frame, "--coeffs", coeffs, "--lambda", "0.3", "--algo", "saturated"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coefficient"));
    // Step beyond 2/B.
    let o = run(&["recover", "--frame", frame, "--coeffs", coeffs, "--algo", "linear", "--alpha", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        run(&["recover", "--frame", frame, "--coeffs", coeffs, "--algo", "saturated"]).status.code(),
        Some(2)
    );
}

#[test]
fn experiment_smoke_run() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let rec = json(&run(&[
        "experiment", "--lambda", "0.4", "--trials", "10", "--iters", "50",
        "--out-dir", dir.path().to_str().unwrap(),
    ]));
    assert!(start.elapsed().as_secs_f64() < 5.0);
    assert_eq!(rec["op"], "experiment");
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iter,mean_err_linear,mean_err_nonlinear,mean_red_db,q1_red_db,q3_red_db"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    for (k, row) in rows.iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 6);
        assert_eq!(f[0].parse::<usize>().unwrap(), k + 1);
        assert!(f[1..].iter().all(|v| v.parse::<f64>().unwrap().is_finite()));
    }
    assert!(dir.path().join("plot.dat").exists());
    assert!(!dir.path().join("raw.csv").exists());
}

#[test]
fn experiment_golden_summary() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&run(&[
        "experiment", "--lambda", "0.4", "--trials", "100", "--iters", "50", "--seed", "42",
        "--out-dir", dir.path().to_str().unwrap(), "--raw",
    ]));
    let got = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let want = std::fs::read_to_string(fixture("summary_l0.4_t100_seed42.csv")).unwrap();
    assert_eq!(got, want);
    let raw = std::fs::read_to_string(dir.path().join("raw.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 100 * 50);
}
