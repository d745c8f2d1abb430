use netclt::oracle::{default_grid, quadrature_check, QUADRATURE_REL_TOL};

#[test]
fn default_grid_quadrature_matches_closed_form() {
    let grid = default_grid();
    assert!(grid.len() >= 50);
    let mut worst: f64 = 0.0;
    for point in &grid {
        let rec = quadrature_check(point, 0.0).unwrap_or_else(|e| panic!("{point:?}: {e}"));
        assert!(rec.passed, "{rec:?}");
        worst = worst.max(rec.rel_err);
    }
    assert!(worst <= QUADRATURE_REL_TOL);
}

#[test]
fn simulator_matches_exact_enumeration() {
    use netclt::oracle::{default_enumeration_cases, enumeration_check};
    use netclt::parallel::Execution;
    for (k, case) in default_enumeration_cases().iter().enumerate() {
        let rec = enumeration_check(case, 20_000, 100 + k as u64, Execution::Parallel).unwrap();
        assert!(rec.passed, "{rec:?}");
    }
}

#[test]
fn verification_report_passes_and_detects_perturbation() {
    use netclt::oracle::{run_verification, VerifyConfig};
    let mut config = VerifyConfig {
        enumeration_reps: 5_000,
        ..VerifyConfig::default()
    };
    config.grid.truncate(10);
    let report = run_verification(&config);
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(report.fluid.len(), 8);

    config.perturb = 1e-3;
    config.enumeration.clear();
    config.fluid.clear();
    let report = run_verification(&config);
    assert_eq!(report.failures.len(), 10);
}
