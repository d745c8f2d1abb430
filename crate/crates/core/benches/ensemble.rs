use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use netclt::distributions::{DegreeDistribution, InfectiousPeriod, PeriodKind};
use netclt::epidemic::{run_ensemble, EpidemicSetup, Initial};
use netclt::graph::{percolation_ensemble, Model, PercolationKind};
use netclt::parallel::Execution;

const REPS: usize = 2_000;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn bench_epidemic(c: &mut Criterion) {
    let (period, lambda) = InfectiousPeriod::matched(PeriodKind::Constant, 0.3).unwrap();
    let mut group = c.benchmark_group("epidemic_ensemble");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    group.throughput(Throughput::Elements(REPS as u64));
    for n in [1_000usize, 10_000] {
        let setup = EpidemicSetup::new(
            Model::NewmanStrogatzWatts,
            n,
            DegreeDistribution::poisson(5.0, 1e-12).unwrap(),
            period.clone(),
            lambda,
        )
        .with_initial(Initial::Fraction {
            eps: 0.05,
            per_degree: None,
        });
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, n), &setup, |b, setup| {
                b.iter(|| run_ensemble(setup, REPS, 1, exec).unwrap());
            });
        }
    }
    group.finish();
}

fn bench_percolation(c: &mut Criterion) {
    let dist = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
    let mut group = c.benchmark_group("bond_percolation_ensemble");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    group.throughput(Throughput::Elements(200));
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::new(name, 5_000), |b| {
            b.iter(|| {
                percolation_ensemble(
                    PercolationKind::Bond,
                    Model::MolloyReed,
                    &dist,
                    5_000,
                    0.3,
                    200,
                    1,
                    exec,
                )
                .unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_epidemic, bench_percolation);
criterion_main!(benches);
