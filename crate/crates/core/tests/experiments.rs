use std::path::Path;

use declip::experiments::{self, parse_summary, run_trial, ExperimentConfig};
use declip::packing;
use declip::saturation;
use declip::Frame;

// Trial 0 of the default configuration (10 × 30, λ = 0.4, seed 42), frozen
// from a reference run: (iteration, linear error, nonlinear error).
const GOLDEN_TRIAL: [(usize, f64, f64); 3] = [
    (1, 0.7929779717509052, 0.43318594171438835),
    (10, 0.2621011165913108, 0.04182006294792292),
    (50, 0.0023915104210026393, 0.00025697716900903206),
];

#[test]
fn golden_trial_pair() {
    let t = run_trial(&ExperimentConfig::default(), 0).unwrap();
    assert_eq!(t.redraws, 0);
    for (k, lin, nl) in GOLDEN_TRIAL {
        assert_eq!(t.linear[k - 1], lin, "linear at {k}");
        assert_eq!(t.nonlinear[k - 1], nl, "nonlinear at {k}");
    }
}

#[test]
fn golden_summary_parses_and_matches_library() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/summary_l0.4_t100_seed42.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let s = parse_summary(&text, &path).unwrap();
    let cfg = ExperimentConfig {
        trials: 100,
        ..ExperimentConfig::default()
    };
    let r = experiments::run_experiment_with(&cfg, 3, false).unwrap();
    assert_eq!(s.mean_err_linear, r.mean_err_linear);
    assert_eq!(s.mean_err_nonlinear, r.mean_err_nonlinear);
    assert_eq!(s.mean_red_db, r.mean_red_db);
    assert_eq!(s.q1_red_db, r.q1_red_db);
    assert_eq!(s.q3_red_db, r.q3_red_db);
}

#[test]
fn redraws_are_counted_at_low_levels() {
    let cfg = ExperimentConfig {
        lambda: 0.16,
        trials: 50,
        ..ExperimentConfig::default()
    };
    let r = experiments::run_experiment_with(&cfg, 0, true).unwrap();
    let raw = r.raw.as_ref().unwrap();
    assert_eq!(r.redraws, raw.iter().map(|t| t.redraws).sum::<u64>());
    assert!(r.redraws > 0);
}

fn fixture_frame(name: &str) -> (Frame, Vec<f64>) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let f = Frame::read(&dir.join(format!("{name}_frame.txt"))).unwrap();
    let x: Vec<f64> = std::fs::read_to_string(dir.join(format!("{name}_x.txt")))
        .unwrap()
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    (f, x)
}

#[test]
fn overshoot_fixture() {
    let (f, x) = fixture_frame("overshoot");
    let lambda = f.analysis(&x).unwrap()[1];
    let r = saturation::badfa_conditions(&f, &x, lambda).unwrap();
    assert!(r.all_hold(), "{:?}", r.holding());
    assert!(r.y1_norm <= r.x_norm);
    assert!(r.overshoots(), "{} <= {}", r.y2_norm, r.x_norm);
    let closed = saturation::overshoot_closed_form(&f, &x, lambda).unwrap();
    for (a, b) in closed.iter().zip(&r.y2) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn overshoot_fixture_without_third_condition() {
    let (f, x) = fixture_frame("overshoot_no_c");
    let lambda = f.analysis(&x).unwrap()[1];
    let r = saturation::badfa_conditions(&f, &x, lambda).unwrap();
    assert_eq!(r.holding(), vec!['a', 'b', 'd']);
    assert!(!r.all_hold());
}

#[test]
fn random_plane_frames_stay_in_interval() {
    let f = Frame::read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/random_n2_m4_seed42.txt")).unwrap();
    let oracle = packing::lambda_c_oracle_n2(&f).unwrap().value();
    let packing::LambdaC::Interval { lower, upper, .. } = packing::lambda_c_bounds(&f).unwrap() else {
        panic!()
    };
    assert!(lower <= oracle && oracle <= upper + 1e-9);
}
