use approx::assert_abs_diff_eq;

use super::*;
use crate::distributions::PeriodKind;

fn matched(kind: PeriodKind, p: f64) -> (InfectiousPeriod, f64) {
    InfectiousPeriod::matched(kind, p).unwrap()
}

fn nsw_table(dist: &DegreeDistribution, kind: PeriodKind) -> TheoryResult {
    let (period, lambda) = matched(kind, 0.3);
    epidemic_theory_positive_uniform(Model::NewmanStrogatzWatts, dist, 0.05, &period, lambda)
        .unwrap()
}

#[test]
fn r0_examples() {
    let c5 = DegreeDistribution::constant(5);
    assert_abs_diff_eq!(basic_reproduction_number(&c5, 0.3).unwrap(), 1.2, epsilon = 1e-12);
    assert_abs_diff_eq!(critical_probability(&c5), 0.25, epsilon = 1e-12);
    let po = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    assert_abs_diff_eq!(basic_reproduction_number(&po, 0.3).unwrap(), 1.5, epsilon = 1e-9);
    let geo = DegreeDistribution::geometric(1.0 / 6.0, 1e-12).unwrap();
    assert_abs_diff_eq!(basic_reproduction_number(&geo, 0.3).unwrap(), 3.0, epsilon = 1e-7);
    assert!(basic_reproduction_number(&DegreeDistribution::constant(0), 0.3).is_err());
}

#[test]
fn linear_root_closed_form() {
    // D = 2 with eps_2 = 0.5: G is linear, z = q / (1 - p (1 - eps))
    let d = DegreeDistribution::constant(2);
    let f = d.reduced(&[0.0, 0.0, 0.5]).unwrap();
    let z = solve_z(&f, 0.5, 0.5, 2.0, RootRegime::PositiveFraction).unwrap();
    assert_abs_diff_eq!(z, 2.0 / 3.0, epsilon = 1e-13);
}

#[test]
fn constant_degree_table_row() {
    let d = DegreeDistribution::constant(5);
    let c = nsw_table(&d, PeriodKind::Constant);
    assert_abs_diff_eq!(c.rho, 0.538_375_247_527_619_1, epsilon = 1e-9);
    assert_abs_diff_eq!(c.sigma2, 2.118_688_705_219_211, epsilon = 1e-9);
    assert!(c.residual.abs() < 1e-12);
    let zi = nsw_table(&d, PeriodKind::ZeroOrInfinity);
    assert_abs_diff_eq!(zi.sigma2, 6.520_043_585_449_033, epsilon = 1e-9);
}

#[test]
fn poisson_table_row() {
    let d = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    let c = nsw_table(&d, PeriodKind::Constant);
    assert_abs_diff_eq!(c.rho, 0.5817, epsilon = 5e-5);
    assert_abs_diff_eq!(c.sigma2, 1.0044, epsilon = 5e-5);
    assert_abs_diff_eq!(nsw_table(&d, PeriodKind::ZeroOrInfinity).sigma2, 3.2505, epsilon = 5e-5);
}

#[test]
fn mr_below_nsw() {
    let d = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    let (period, lambda) = matched(PeriodKind::Constant, 0.3);
    let mr = epidemic_theory_positive_uniform(Model::MolloyReed, &d, 0.05, &period, lambda).unwrap();
    let nsw = nsw_table(&d, PeriodKind::Constant);
    assert_abs_diff_eq!(mr.rho, nsw.rho, epsilon = 1e-14);
    assert!(mr.sigma2 < nsw.sigma2);
}

#[test]
fn nsw_requires_random_initials() {
    let d = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    let mut eps_i = vec![0.0; d.pmf().len()];
    eps_i[5] = 0.05;
    let (period, lambda) = matched(PeriodKind::Constant, 0.3);
    assert!(matches!(
        epidemic_theory_positive(Model::NewmanStrogatzWatts, &d, &eps_i, &period, lambda),
        Err(Error::ConditionViolated(_))
    ));
    assert!(epidemic_theory_positive(Model::MolloyReed, &d, &eps_i, &period, lambda).is_ok());
}

#[test]
fn major_regime_errors() {
    let (period, lambda) = matched(PeriodKind::Constant, 1.0);
    let r = epidemic_theory_major(Model::MolloyReed, &DegreeDistribution::constant(5), &period, lambda);
    assert!(matches!(r, Err(Error::ConditionViolated(_))));
    let (period, lambda) = matched(PeriodKind::Constant, 0.2);
    let r = epidemic_theory_major(Model::MolloyReed, &DegreeDistribution::constant(5), &period, lambda);
    assert!(matches!(r, Err(Error::Subcritical { .. })));
    assert!(matches!(
        giant_component_theory(Model::NewmanStrogatzWatts, &DegreeDistribution::constant(5)),
        Err(Error::ConditionViolated(_))
    ));
}

#[test]
fn major_regime_root_and_pmaj() {
    let d = DegreeDistribution::constant(5);
    let (period, lambda) = matched(PeriodKind::Constant, 0.3);
    let r = epidemic_theory_major(Model::NewmanStrogatzWatts, &d, &period, lambda).unwrap();
    assert!(r.z > 0.0 && r.z < 1.0);
    assert!(r.residual.abs() < 1e-10);
    assert_abs_diff_eq!(r.p_maj.unwrap(), r.rho, epsilon = 1e-10);
    // constant degree: MR and NSW coincide
    let m = epidemic_theory_major(Model::MolloyReed, &d, &period, lambda).unwrap();
    assert_abs_diff_eq!(m.sigma2, r.sigma2, epsilon = 1e-10);
}

#[test]
fn pmaj_limits() {
    let d = DegreeDistribution::constant(5);
    assert_eq!(major_outbreak_prob(&d, 0.2), 0.0);
    assert_abs_diff_eq!(major_outbreak_prob(&d, 1.0), 1.0, epsilon = 1e-15);
}

#[test]
fn pmaj_zero_or_infinity_scales_by_pi() {
    // with I in {0, inf}, an outbreak needs an infinite initial period and then
    // behaves like p_I = 1 on the pi-thinned branching process
    let d = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    let p = major_outbreak_prob_for_period(&d, &InfectiousPeriod::ZeroOrInfinity(0.3), 1.0)
        .unwrap()
        .unwrap();
    let c = major_outbreak_prob(&d, 0.3);
    assert!(p < c);
    assert!(p > 0.0);
}

#[test]
fn pmaj_exponential_between_extremes() {
    let d = DegreeDistribution::geometric(1.0 / 6.0, 1e-12).unwrap();
    let (period, lambda) = matched(PeriodKind::Exponential, 0.3);
    let pe = major_outbreak_prob_for_period(&d, &period, lambda).unwrap().unwrap();
    let pc = major_outbreak_prob(&d, 0.3);
    let pz = major_outbreak_prob_for_period(&d, &InfectiousPeriod::ZeroOrInfinity(0.3), 1.0)
        .unwrap()
        .unwrap();
    assert!(pz < pe && pe < pc, "{pz} {pe} {pc}");
}

#[test]
fn bond_matches_constant_epidemic() {
    let d = DegreeDistribution::geometric(1.0 / 6.0, 1e-12).unwrap();
    for model in [Model::MolloyReed, Model::NewmanStrogatzWatts] {
        let bond = percolation_theory(PercolationKind::Bond, model, &d, 0.3).unwrap();
        let (period, lambda) = matched(PeriodKind::Constant, 0.3);
        let epi = epidemic_theory_major(model, &d, &period, lambda).unwrap();
        assert_abs_diff_eq!(bond.z, epi.z, epsilon = 1e-12);
        assert_abs_diff_eq!(bond.rho, epi.rho, epsilon = 1e-12);
        assert_abs_diff_eq!(bond.sigma2, epi.sigma2, epsilon = 1e-12);
    }
}

#[test]
fn site_mean_and_subcritical_cycle() {
    let d = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    let s = percolation_theory(PercolationKind::Site, Model::MolloyReed, &d, 0.3).unwrap();
    assert_abs_diff_eq!(s.mean, 0.3 * s.rho, epsilon = 1e-15);
    assert!(s.sigma2 > 0.0);
    let r = percolation_theory(PercolationKind::Bond, Model::NewmanStrogatzWatts, &DegreeDistribution::constant(2), 0.3);
    assert!(matches!(r, Err(Error::Subcritical { .. })));
    assert!(percolation_theory(PercolationKind::Bond, Model::MolloyReed, &d, 1.0).is_err());
}

#[test]
fn near_critical_guard() {
    assert!(matches!(
        h_value(0.25, 0.75, 5.0, 0.9, 20.0),
        Err(Error::NearCritical { .. })
    ));
}

#[test]
fn json_keys() {
    let r = nsw_table(&DegreeDistribution::constant(5), PeriodKind::Constant);
    let v = serde_json::to_value(&r).unwrap();
    for key in ["regime", "z", "tau", "rho", "h", "R0", "pC", "pmaj", "sigma2", "variant", "residual"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["variant"], "NSW-epidemic");
}
