use heinz_cli::{run_suite, SuiteConfig};

fn config(suites: &[&str], dims: &[usize], trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        suites: suites.iter().map(|s| s.to_string()).collect(),
        dims: dims.to_vec(),
        trials,
        seed,
        ..SuiteConfig::default()
    }
}

#[test]
fn scalar_t2_run() {
    let report = run_suite(&config(&["check_t2"], &[1], 1, 7)).unwrap();
    assert_eq!(report.suites.len(), 1);
    let s = &report.suites[0];
    assert_eq!(s.total, 9 * 6);
    assert_eq!(s.failed, 0);
    assert_eq!(s.total, s.passed + s.failed);
    assert!(report.failures.is_empty() && report.errors.is_empty());
}

#[test]
fn zou_is_expected_negative() {
    let report = run_suite(&config(&["zou"], &[2], 1, 0)).unwrap();
    let s = &report.suites[0];
    assert!(s.expected_negative);
    assert_eq!((s.total, s.passed, s.failed), (1, 1, 0));
    assert!(s.worst_margin < 0.0);
    assert!(report.all_passed());
    assert!(report.to_json().contains("\"expected_negative\": true"));
}

#[test]
fn every_suite_passes_on_small_dims() {
    let report = run_suite(&config(&["all"], &[1, 2, 5], 3, 11)).unwrap();
    for s in &report.suites {
        assert_eq!(s.failed, 0, "{}", s.name);
        assert!(s.total > 0);
    }
    assert!(report.errors.is_empty(), "{:?}", report.errors);
}

#[test]
fn reports_are_reproducible() {
    let cfg = config(
        &["check_t1", "check_hiai_zhan", "check_convexity_extension"],
        &[2, 3],
        4,
        99,
    );
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    assert_eq!(a.canonical_json(), b.canonical_json());
    assert!(!a.canonical_json().contains("wall_time_s"));
    let other = run_suite(&SuiteConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.canonical_json(), other.canonical_json());
}

#[test]
fn worst_case_params_identify_the_instance() {
    let report = run_suite(&config(&["check_reverse_heinz"], &[3], 2, 5)).unwrap();
    let p = &report.suites[0].worst_case_params;
    for key in ["dim", "trial", "seed", "nu", "norm"] {
        assert!(p.contains_key(key), "missing {key}");
    }
}

#[test]
fn config_errors_name_the_field() {
    let mut cfg = config(&["check_t3"], &[2], 1, 0);
    cfg.nu_grid = Some(vec![0.1]);
    let err = run_suite(&cfg).unwrap_err().to_string();
    assert!(err.contains("nu_grid") && err.contains("check_t3"), "{err}");
}

#[test]
fn csv_summary() {
    let report = run_suite(&config(&["check_t4", "check_t2_integral"], &[2], 1, 3)).unwrap();
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("suite,total,passed,failed,worst_margin,worst_relative_margin\n"));
}
