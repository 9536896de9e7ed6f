use std::ffi::{CStr, CString};
use std::ptr;

use declip::{experiments, frames, packing, recovery, Rng};
use declip_ffi::*;

unsafe fn last_error() -> String {
    let p = declip_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn etf2() -> *mut DeclipFrame {
    let mut f = ptr::null_mut();
    assert_eq!(declip_frame_etf(2, &mut f), DeclipStatus::Ok);
    f
}

#[test]
fn etf_shape_bounds_and_critical_level() {
    unsafe {
        let f = etf2();
        assert_eq!((declip_frame_dim(f), declip_frame_len(f)), (2, 3));
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(declip_frame_bounds(f, &mut a, &mut b), DeclipStatus::Ok);
        assert!((a - 1.5).abs() < 1e-12 && (b - 1.5).abs() < 1e-12);
        let mut mu = 0.0;
        assert_eq!(declip_frame_coherence(f, &mut mu), DeclipStatus::Ok);
        assert!((mu - 0.5).abs() < 1e-12);

        let mut lc = std::mem::zeroed::<DeclipLambdaC>();
        assert_eq!(declip_lambda_c(f, DECLIP_LAMBDA_EXACT, 0, 0, &mut lc), DeclipStatus::Ok);
        assert!((lc.value - 0.75f64.sqrt()).abs() < 1e-12);
        assert_eq!((lc.lower, lc.upper), (lc.value, lc.value));
        assert!(lc.upper_certified);

        assert_eq!(declip_lambda_c(f, DECLIP_LAMBDA_ESTIMATE, 20, 5, &mut lc), DeclipStatus::Ok);
        assert!((lc.value - 0.75f64.sqrt()).abs() < 1e-9);
        assert!(lc.upper.is_nan() && !lc.upper_certified);
        declip_frame_free(f);
    }
}

#[test]
fn random_frame_matches_library_stream() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(declip_frame_random(3, 7, 42, &mut f), DeclipStatus::Ok);
        let mut rows = vec![0.0; 21];
        assert_eq!(declip_frame_vectors(f, rows.as_mut_ptr(), rows.len()), DeclipStatus::Ok);
        let expect = frames::random_unit_frame(3, 7, &mut Rng::seed_from_u64(42)).unwrap();
        assert_eq!(rows.as_slice(), expect.analysis_matrix().as_slice());

        let mut g = ptr::null_mut();
        assert_eq!(declip_frame_from_rows(rows.as_ptr(), 7, 3, &mut g), DeclipStatus::Ok);
        let mut sc = std::mem::zeroed::<DeclipLambdaC>();
        let mut lc = std::mem::zeroed::<DeclipLambdaC>();
        assert_eq!(declip_lambda_c(g, DECLIP_LAMBDA_BOUNDS, 0, 0, &mut lc), DeclipStatus::Ok);
        let packing::LambdaC::Interval { lower, upper, .. } = packing::lambda_c_bounds(&expect).unwrap() else {
            panic!()
        };
        assert_eq!((lc.lower, lc.upper), (lower, upper));
        assert_eq!(declip_lambda_c(g, DECLIP_LAMBDA_ESTIMATE, 10, 9, &mut sc), DeclipStatus::Ok);
        assert!(lc.lower <= sc.value && sc.value <= lc.upper + 1e-9);
        declip_frame_free(f);
        declip_frame_free(g);
    }
}

#[test]
fn saturated_recovery_matches_library() {
    unsafe {
        let f = etf2();
        let x = [0.3, 0.4];
        let lambda = 0.45;
        let mut c = [0.0; 3];
        assert_eq!(declip_frame_analysis(f, x.as_ptr(), 2, c.as_mut_ptr(), 3), DeclipStatus::Ok);
        let mut sat = [0.0; 3];
        assert_eq!(declip_saturate(c.as_ptr(), 3, lambda, sat.as_mut_ptr()), DeclipStatus::Ok);
        assert!(sat.iter().all(|v| v.abs() <= lambda));

        let step = 2.0 / 3.0;
        let mut t = ptr::null_mut();
        let status = declip_recover_saturated(f, sat.as_ptr(), 3, lambda, step, step, 30, x.as_ptr(), &mut t);
        assert_eq!(status, DeclipStatus::Ok);
        assert_eq!(declip_trace_iterations(t), 30);
        let mut errors = vec![0.0; 31];
        assert_eq!(declip_trace_errors(t, errors.as_mut_ptr(), 31), DeclipStatus::Ok);
        let mut y = [0.0; 2];
        assert_eq!(declip_trace_iterate(t, 30, y.as_mut_ptr(), 2), DeclipStatus::Ok);

        let frame = frames::simplex_etf(2).unwrap();
        let expect = recovery::saturated_frame_algorithm(
            &frame,
            &sat,
            lambda,
            &recovery::StepSchedule::constant(step, step),
            30,
            Some(&x),
        )
        .unwrap();
        assert_eq!(errors, expect.errors);
        assert_eq!(y.as_slice(), expect.last());
        declip_trace_free(t);
        declip_frame_free(f);
    }
}

#[test]
fn linear_recovery_of_parseval_basis_is_one_step() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(declip_frame_onb(3, &mut f), DeclipStatus::Ok);
        let x = [0.1, -0.2, 0.3];
        let mut t = ptr::null_mut();
        assert_eq!(declip_recover_linear(f, x.as_ptr(), 3, 1.0, 1, ptr::null(), &mut t), DeclipStatus::Ok);
        let mut y = [0.0; 3];
        assert_eq!(declip_trace_iterate(t, 1, y.as_mut_ptr(), 3), DeclipStatus::Ok);
        assert_eq!(y, x);
        let mut res = [1.0; 2];
        assert_eq!(declip_trace_residuals(t, res.as_mut_ptr(), 2), DeclipStatus::Ok);
        assert_eq!(res[1], 0.0);
        declip_trace_free(t);
        declip_frame_free(f);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(declip_frame_random(3, 2, 1, &mut f), DeclipStatus::BadShape);
        assert!(f.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(declip_frame_etf(2, ptr::null_mut()), DeclipStatus::NullPointer);
        assert!(last_error().contains("NULL"));

        let f = etf2();
        let mut small = [0.0; 2];
        let x = [1.0, 0.0];
        assert_eq!(
            declip_frame_analysis(f, x.as_ptr(), 2, small.as_mut_ptr(), 2),
            DeclipStatus::BufferTooSmall
        );
        assert_eq!(small, [0.0; 2]);

        let mut lc = std::mem::zeroed::<DeclipLambdaC>();
        assert_eq!(declip_lambda_c(f, 99, 0, 0, &mut lc), DeclipStatus::InvalidArgument);

        let mut t = ptr::null_mut();
        let c = [0.5, -0.25, -0.25];
        let early = declip_recover_linear(f, c.as_ptr(), 3, 2.0, 5, ptr::null(), &mut t);
        assert_eq!(early, DeclipStatus::StepOutOfRange);
        let over = [0.9, 0.0, 0.0];
        let bad = declip_recover_saturated(f, over.as_ptr(), 3, 0.5, 0.5, 0.5, 5, ptr::null(), &mut t);
        assert_eq!(bad, DeclipStatus::BadCoeffs);

        let missing = CString::new("/nonexistent/frame.txt").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(declip_frame_read(missing.as_ptr(), &mut g), DeclipStatus::Io);
        declip_frame_free(f);

        assert_eq!(declip_frame_dim(ptr::null()), 0);
        declip_frame_free(ptr::null_mut());
        declip_trace_free(ptr::null_mut());
        declip_report_free(ptr::null_mut());
    }
}

#[test]
fn frame_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("f.txt").to_str().unwrap()).unwrap();
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(declip_frame_random(2, 5, 3, &mut f), DeclipStatus::Ok);
        assert_eq!(declip_frame_write(f, path.as_ptr()), DeclipStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(declip_frame_read(path.as_ptr(), &mut g), DeclipStatus::Ok);
        let (mut a, mut b) = ([0.0; 10], [0.0; 10]);
        declip_frame_vectors(f, a.as_mut_ptr(), 10);
        declip_frame_vectors(g, b.as_mut_ptr(), 10);
        assert_eq!(a, b);

        let mut o1 = std::mem::zeroed::<DeclipLambdaC>();
        assert_eq!(declip_lambda_c(g, DECLIP_LAMBDA_ORACLE_N2, 0, 0, &mut o1), DeclipStatus::Ok);
        let mut p = ptr::null_mut();
        assert_eq!(declip_frame_canonical_parseval(g, &mut p), DeclipStatus::Ok);
        let (mut lo, mut hi) = (0.0, 0.0);
        declip_frame_bounds(p, &mut lo, &mut hi);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        let mut spark = false;
        assert_eq!(declip_frame_is_full_spark(g, &mut spark), DeclipStatus::Ok);
        assert!(spark);
        for h in [f, g, p] {
            declip_frame_free(h);
        }
    }
}

#[test]
fn experiment_report_matches_library() {
    let cfg = DeclipExperimentConfig {
        trials: 20,
        iters: 10,
        ..declip_experiment_default_config()
    };
    let dir = tempfile::tempdir().unwrap();
    let dir_c = CString::new(dir.path().to_str().unwrap()).unwrap();
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(declip_experiment_run(&cfg, 2, true, &mut r), DeclipStatus::Ok);
        assert_eq!(declip_report_iters(r), 10);
        let mut db = vec![0.0; 10];
        assert_eq!(
            declip_report_series(r, DECLIP_SERIES_MEAN_RED_DB, db.as_mut_ptr(), 10),
            DeclipStatus::Ok
        );
        let expect = experiments::run_experiment_with(&cfg.into(), 1, true).unwrap();
        assert_eq!(db, expect.mean_red_db);
        assert_eq!(declip_report_redraws(r), expect.redraws);
        assert_eq!(declip_report_nonlinear_dominates(r), expect.nonlinear_dominates);
        assert_eq!(declip_report_series(r, 42, db.as_mut_ptr(), 10), DeclipStatus::InvalidArgument);

        assert_eq!(declip_report_write(r, dir_c.as_ptr()), DeclipStatus::Ok);
        let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary, experiments::summary_csv(&expect));
        assert!(dir.path().join("raw.csv").exists());
        declip_report_free(r);

        let bad = DeclipExperimentConfig { m: 5, ..cfg };
        let mut r = ptr::null_mut();
        assert_eq!(declip_experiment_run(&bad, 1, false, &mut r), DeclipStatus::BadShape);
    }
}

#[test]
fn welch_and_version() {
    unsafe {
        let mut w = 0.0;
        assert_eq!(declip_welch_bound(3, 2, &mut w), DeclipStatus::Ok);
        assert!((w - 0.5).abs() < 1e-15);
        let v = CStr::from_ptr(declip_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
