use netclt::distributions::{
    DegreeDistribution, GeneratingFunction, InfectiousPeriod, PeriodKind, TransmissionParams,
};
use netclt::epidemic::{EpidemicSetup, EpidemicSimulator, Initial, Mode, SimState};
use netclt::graph::{components, mr_degree_sequence, pair_half_edges, DegreeSequence, Model};
use netclt::oracle::{enumerate_final_size, EnumerationPeriod};
use netclt::rng::replicate_rng;
use netclt::theory::{
    major_with_params, percolation_theory, positive_with_params, Analysis, PercolationKind,
};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = DegreeDistribution> {
    prop_oneof![
        (2usize..8).prop_map(DegreeDistribution::constant),
        (1.5f64..8.0).prop_map(|m| DegreeDistribution::poisson(m, 1e-12).unwrap()),
        (0.1f64..0.4).prop_map(|p| DegreeDistribution::geometric(p, 1e-12).unwrap()),
        (0.5f64..2.0, 5.0f64..20.0)
            .prop_map(|(a, k)| DegreeDistribution::power_cutoff(a, k, 1e-12).unwrap()),
    ]
}

fn period() -> impl Strategy<Value = PeriodKind> {
    prop_oneof![
        Just(PeriodKind::Constant),
        Just(PeriodKind::Exponential),
        Just(PeriodKind::ZeroOrInfinity),
    ]
}

fn params(kind: PeriodKind, p: f64) -> TransmissionParams {
    let (period, lambda) = InfectiousPeriod::matched(kind, p).unwrap();
    period.transmission_params(lambda).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_contact_escape_dominates_square(kind in period(), lambda in 0.0f64..5.0, param in 0.05f64..1.0) {
        let period = InfectiousPeriod::new(kind, param).unwrap();
        let tp = period.transmission_params(lambda).unwrap();
        prop_assert!(tp.q_i2 >= tp.q_i * tp.q_i - 1e-15);
        prop_assert!((tp.p_i + tp.q_i - 1.0).abs() < 1e-15);
    }

    #[test]
    fn positive_fraction_root_residual(dist in family(), kind in period(), p in 0.05f64..0.95, eps in 0.005f64..0.5) {
        let eps_i: Vec<f64> = dist.pmf().iter().map(|q| eps * q).collect();
        let tp = params(kind, p);
        for model in [Model::MolloyReed, Model::NewmanStrogatzWatts] {
            let r = positive_with_params(model, &dist, &eps_i, tp).unwrap();
            prop_assert!(r.residual.abs() <= 1e-10, "{r:?}");
            prop_assert!(r.z > 0.0 && r.z < 1.0);
            prop_assert!(r.rho > 0.0 && r.rho < 1.0 - eps + 1e-12);
            prop_assert!(r.sigma2 > 0.0);
        }
    }

    #[test]
    fn nsw_variance_dominates_mr(dist in family(), kind in period(), p in 0.05f64..0.95, eps in 0.005f64..0.5) {
        let eps_i: Vec<f64> = dist.pmf().iter().map(|q| eps * q).collect();
        let tp = params(kind, p);
        let mr = positive_with_params(Model::MolloyReed, &dist, &eps_i, tp).unwrap();
        let nsw = positive_with_params(Model::NewmanStrogatzWatts, &dist, &eps_i, tp).unwrap();
        prop_assert!((mr.rho - nsw.rho).abs() < 1e-12);
        if dist.variance() == 0.0 {
            prop_assert!((nsw.sigma2 - mr.sigma2).abs() <= 1e-9 * mr.sigma2 + 1e-12, "{} vs {} {:?}", nsw.sigma2, mr.sigma2, tp);
        } else {
            prop_assert!(nsw.sigma2 > mr.sigma2, "{} vs {}", nsw.sigma2, mr.sigma2);
        }
    }

    #[test]
    fn constant_period_minimizes_variance(dist in family(), p in 0.05f64..0.95, eps in 0.005f64..0.5) {
        let eps_i: Vec<f64> = dist.pmf().iter().map(|q| eps * q).collect();
        for model in [Model::MolloyReed, Model::NewmanStrogatzWatts] {
            let c = positive_with_params(model, &dist, &eps_i, params(PeriodKind::Constant, p)).unwrap();
            let e = positive_with_params(model, &dist, &eps_i, params(PeriodKind::Exponential, p)).unwrap();
            let z = positive_with_params(model, &dist, &eps_i, params(PeriodKind::ZeroOrInfinity, p)).unwrap();
            prop_assert!(c.sigma2 <= e.sigma2 + 1e-12);
            prop_assert!(e.sigma2 <= z.sigma2 + 1e-12);
        }
    }

    #[test]
    fn major_outbreak_prob_equals_rho_for_constant_period(dist in family(), p in 0.05f64..0.95) {
        let tp = TransmissionParams::constant(p);
        if let Ok(r) = major_with_params(Model::MolloyReed, &dist, tp, Analysis::Epidemic) {
            prop_assert!(r.residual.abs() <= 1e-10);
            prop_assert!((r.p_maj.unwrap() - r.rho).abs() <= 1e-10, "{r:?}");
        }
    }

    #[test]
    fn bond_percolation_is_the_constant_period_epidemic(dist in family(), pi in 0.05f64..0.95) {
        for model in [Model::MolloyReed, Model::NewmanStrogatzWatts] {
            let epi = major_with_params(model, &dist, TransmissionParams::constant(pi), Analysis::Epidemic);
            let bond = percolation_theory(PercolationKind::Bond, model, &dist, pi);
            match (epi, bond) {
                (Ok(e), Ok(b)) => {
                    prop_assert!((e.rho - b.rho).abs() <= 1e-12);
                    prop_assert!((e.sigma2 - b.sigma2).abs() <= 1e-12 * e.sigma2.abs().max(1.0));
                }
                (Err(_), Err(_)) => {}
                (e, b) => prop_assert!(false, "{e:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn mr_quantile_sequence_has_n_entries_and_bounded_counts(dist in family(), n in 1usize..3000) {
        let seq = mr_degree_sequence(&dist, n);
        prop_assert_eq!(seq.n(), n);
        for (i, &c) in seq.counts().iter().enumerate() {
            // (n + 1) p_i quantile levels fall in class i, up to one at each end
            prop_assert!((c as f64 - n as f64 * dist.prob(i)).abs() <= 2.0);
        }
        prop_assert!(seq.degrees().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn pairing_preserves_degrees(degrees in prop::collection::vec(0usize..6, 1..40), seed in any::<u64>()) {
        let seq = DegreeSequence::new(degrees.clone());
        let g = pair_half_edges(&seq, &mut replicate_rng(seed, 0));
        let got = g.degrees();
        let deficit: usize = degrees.iter().zip(&got).map(|(d, g)| d - g).sum();
        prop_assert_eq!(deficit, seq.total_half_edges() % 2);
        let c = components(&g);
        prop_assert_eq!(c.sizes.iter().sum::<usize>(), degrees.len());
    }

    #[test]
    fn enumeration_pmf_sums_to_one(degrees in prop::collection::vec(1usize..4, 1..5), p in 0.0f64..=1.0, all_or_nothing in any::<bool>()) {
        prop_assume!(degrees.iter().sum::<usize>() <= 8);
        let period = if all_or_nothing {
            EnumerationPeriod::ZeroOrInfinity(p)
        } else {
            EnumerationPeriod::Constant(p)
        };
        let pmf = enumerate_final_size(&degrees, period, 0).unwrap();
        prop_assert!((pmf.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(pmf.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn jump_chain_conserves_half_edges(x in prop::collection::vec(0usize..20, 1..8), y in 1u64..20, z in 0u64..20, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let (period, lambda) = InfectiousPeriod::matched(PeriodKind::ZeroOrInfinity, p).unwrap();
        let sampler = period.sampler(lambda, x.len());
        let mut state = SimState::new(x.clone(), y, z, Mode::SiteCount);
        let mut rng = replicate_rng(seed, 1);
        let susceptible0: usize = x.iter().sum();
        while !state.is_terminal() {
            let before = state.total_half_edges();
            state.step(&sampler, &mut rng).unwrap();
            prop_assert_eq!(before - state.total_half_edges(), 2);
        }
        let infected = susceptible0 - state.x.iter().sum::<usize>();
        prop_assert!(state.v <= infected);
        prop_assert!(state.total_half_edges() <= 1 || state.y_e == 0);
    }

    #[test]
    fn final_size_bounded_and_seed_deterministic(dist in family(), n in 10usize..300, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let (period, lambda) = InfectiousPeriod::matched(PeriodKind::Constant, p).unwrap();
        let setup = EpidemicSetup::new(Model::NewmanStrogatzWatts, n, dist, period, lambda)
            .with_initial(Initial::Count { a: 3, per_degree: None });
        let sim = EpidemicSimulator::new(setup).unwrap();
        let a = sim.run(&mut replicate_rng(seed, 7));
        let b = sim.run(&mut replicate_rng(seed, 7));
        prop_assert_eq!(&a, &b);
        prop_assert!(a.t <= n - 3);
        prop_assert_eq!(a.initial_infectives, 3);
    }
}

#[test]
fn zero_transmission_infects_nobody() {
    let (period, _) = InfectiousPeriod::matched(PeriodKind::Constant, 0.5).unwrap();
    let setup = EpidemicSetup::new(
        Model::MolloyReed,
        500,
        DegreeDistribution::poisson(4.0, 1e-12).unwrap(),
        period,
        0.0,
    )
    .with_initial(Initial::Fraction {
        eps: 0.1,
        per_degree: None,
    });
    let sim = EpidemicSimulator::new(setup).unwrap();
    for rep in 0..20 {
        // the initial infective's neighbours still receive no transmission
        assert_eq!(sim.run(&mut replicate_rng(3, rep)).t, 0);
    }
}

#[test]
fn pgf_derivatives_are_nonnegative_on_unit_interval() {
    let d = DegreeDistribution::power_cutoff(1.0, 13.796, 1e-12).unwrap();
    for k in 0..4 {
        for s in [0.0, 0.3, 0.7, 1.0] {
            assert!(d.derivative(s, k) >= 0.0);
        }
    }
}
