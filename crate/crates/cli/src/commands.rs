use serde::Serialize;

use netclt::distributions::{
    parse_degree_spec, parse_period_spec, DegreeDistribution, InfectiousPeriod, PeriodKind,
};
use netclt::epidemic::{run_ensemble, EnsembleSummary, EpidemicSetup, Initial, Mode};
use netclt::graph::{percolation_ensemble, Model, PercolationKind};
use netclt::oracle::{run_verification, VerifyConfig};
use netclt::parallel::Execution;
use netclt::stats::{histogram, mean_var};
use netclt::theory::{
    epidemic_theory_major, epidemic_theory_positive, epidemic_theory_positive_uniform,
    giant_component_theory, percolation_theory, TheoryResult,
};

use crate::args::{
    Format, KindArg, ModelArg, PercolateArgs, SimMode, SimulateArgs, TableArgs, TheoryArgs,
    TheoryMode, TransmissionArgs, VerifyArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{csv_rows, json};

const CONSISTENCY_TOL: f64 = 1e-9;

fn model(m: ModelArg) -> Model {
    match m {
        ModelArg::Mr => Model::MolloyReed,
        ModelArg::Nsw => Model::NewmanStrogatzWatts,
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Contact rate giving transmission probability `p` for a period of the given
/// family with parameter `param`.
fn rate_for(kind: PeriodKind, param: f64, p: f64) -> CliResult<f64> {
    Ok(match kind {
        PeriodKind::Constant => -(1.0 - p).ln() / param,
        PeriodKind::Exponential => param * p / (1.0 - p),
        PeriodKind::ZeroOrInfinity => {
            if (param - p).abs() > CONSISTENCY_TOL {
                return Err(usage(format!(
                    "zeroinf:{param} transmits with probability {param}, not --pI {p}"
                )));
            }
            1.0
        }
    })
}

/// Period and contact rate from `--period` with `--pI` and/or `--lambda`.
pub fn resolve_transmission(t: &TransmissionArgs) -> CliResult<(InfectiousPeriod, f64)> {
    let (kind, param) = parse_period_spec(&t.period)?;
    if let Some(p) = t.p_i {
        if !(0.0..=1.0).contains(&p) {
            return Err(usage(format!("--pI {p} outside [0, 1]")));
        }
    }
    let (period, lambda) = match (t.p_i, t.lambda, param) {
        (None, None, _) => return Err(usage("one of --pI or --lambda is required")),
        (Some(p), None, None) => InfectiousPeriod::matched(kind, p)?,
        (Some(p), None, Some(c)) => (InfectiousPeriod::new(kind, c)?, rate_for(kind, c, p)?),
        (_, Some(l), param) => {
            let param = match (kind, param) {
                (PeriodKind::ZeroOrInfinity, None) => t.p_i.ok_or_else(|| {
                    usage("zeroinf needs its probability: `zeroinf:<pi>` or --pI")
                })?,
                (_, p) => p.unwrap_or(1.0),
            };
            (InfectiousPeriod::new(kind, param)?, l)
        }
    };
    if let (Some(p), Some(_)) = (t.p_i, t.lambda) {
        let implied = period.transmission_params(lambda)?.p_i;
        if (implied - p).abs() > CONSISTENCY_TOL {
            return Err(usage(format!(
                "--pI {p} is inconsistent with {} at --lambda {lambda} (p_I = {implied})",
                period.kind_name()
            )));
        }
    }
    period.transmission_params(lambda)?;
    Ok((period, lambda))
}

fn degree(spec: &str) -> CliResult<DegreeDistribution> {
    Ok(parse_degree_spec(spec)?)
}

pub fn theory(args: &TheoryArgs, format: Format) -> CliResult<Vec<u8>> {
    let dist = degree(&args.degree)?;
    let m = model(args.model);
    let result = match args.mode {
        TheoryMode::Epidemic => {
            let (period, lambda) = resolve_transmission(&args.transmission)?;
            match (&args.eps_i, args.eps) {
                (Some(eps_i), _) => epidemic_theory_positive(m, &dist, eps_i, &period, lambda)?,
                (None, Some(eps)) => {
                    epidemic_theory_positive_uniform(m, &dist, eps, &period, lambda)?
                }
                (None, None) => epidemic_theory_major(m, &dist, &period, lambda)?,
            }
        }
        TheoryMode::Bond | TheoryMode::Site => {
            let pi = args
                .pi
                .or(args.transmission.p_i)
                .ok_or_else(|| usage("percolation needs --pi"))?;
            let kind = if args.mode == TheoryMode::Bond {
                PercolationKind::Bond
            } else {
                PercolationKind::Site
            };
            percolation_theory(kind, m, &dist, pi)?
        }
        TheoryMode::Giant => giant_component_theory(m, &dist)?,
    };
    match format {
        Format::Json => json(&result),
        Format::Csv => csv_rows([&result]),
    }
}

#[derive(Serialize)]
struct SimulationReport {
    summary: EnsembleSummary,
    /// Asymptotic values for the same parameters, when the limit theorem applies.
    theory: Option<TheoryResult>,
}

pub fn simulate(args: &SimulateArgs, format: Format, exec: Execution) -> CliResult<Vec<u8>> {
    let dist = degree(&args.degree)?;
    let (period, lambda) = resolve_transmission(&args.transmission)?;
    let m = model(args.model);
    let initial = match (args.eps, args.a) {
        (Some(eps), _) => Initial::Fraction {
            eps,
            per_degree: None,
        },
        (None, a) => Initial::Count {
            a: a.unwrap_or(1),
            per_degree: None,
        },
    };
    let mode = match args.mode {
        SimMode::Epidemic => Mode::Epidemic,
        SimMode::SiteCount => Mode::SiteCount,
    };
    let setup = EpidemicSetup::new(m, args.n, dist.clone(), period.clone(), lambda)
        .with_initial(initial)
        .with_mode(mode)
        .with_log_base(args.log_base);
    let result = run_ensemble(&setup, args.reps as usize, args.seed, exec)?;
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            result.write_csv(&mut buf)?;
            Ok(buf)
        }
        Format::Json => {
            let theory = match args.eps {
                Some(eps) => epidemic_theory_positive_uniform(m, &dist, eps, &period, lambda),
                None => epidemic_theory_major(m, &dist, &period, lambda),
            }
            .ok();
            json(&SimulationReport {
                summary: result.summary,
                theory,
            })
        }
    }
}

#[derive(Debug, Serialize)]
struct TableRow {
    degree: String,
    /// Population size, or `inf` for the asymptotic row.
    n: String,
    rho_const: f64,
    sigma2_const: f64,
    rho_zeroinf: f64,
    sigma2_zeroinf: f64,
}

pub fn reproduce_table(args: &TableArgs, format: Format, exec: Execution) -> CliResult<Vec<u8>> {
    const EPS: f64 = 0.05;
    const P_I: f64 = 0.3;
    let kinds = [PeriodKind::Constant, PeriodKind::ZeroOrInfinity];
    let mut rows = Vec::new();
    let mut cell = 0u64;
    for spec in &args.degrees {
        let dist = degree(spec)?;
        for &n in &args.ns {
            let mut moments = [(0.0, 0.0); 2];
            for (slot, &kind) in moments.iter_mut().zip(&kinds) {
                let (period, lambda) = InfectiousPeriod::matched(kind, P_I)?;
                let setup =
                    EpidemicSetup::new(Model::NewmanStrogatzWatts, n, dist.clone(), period, lambda)
                        .with_initial(Initial::Fraction {
                            eps: EPS,
                            per_degree: None,
                        });
                let seed = args.seed.wrapping_add(cell);
                cell += 1;
                let s = run_ensemble(&setup, args.reps as usize, seed, exec)?.summary;
                *slot = (s.rho_hat, s.sigma2_hat);
            }
            rows.push(TableRow {
                degree: spec.clone(),
                n: n.to_string(),
                rho_const: moments[0].0,
                sigma2_const: moments[0].1,
                rho_zeroinf: moments[1].0,
                sigma2_zeroinf: moments[1].1,
            });
        }
        let mut limit = [(0.0, 0.0); 2];
        for (slot, &kind) in limit.iter_mut().zip(&kinds) {
            let (period, lambda) = InfectiousPeriod::matched(kind, P_I)?;
            let r = epidemic_theory_positive_uniform(
                Model::NewmanStrogatzWatts,
                &dist,
                EPS,
                &period,
                lambda,
            )?;
            *slot = (r.rho, r.sigma2);
        }
        rows.push(TableRow {
            degree: spec.clone(),
            n: "inf".into(),
            rho_const: limit[0].0,
            sigma2_const: limit[0].1,
            rho_zeroinf: limit[1].0,
            sigma2_zeroinf: limit[1].1,
        });
    }
    match format {
        Format::Json => json(&rows),
        Format::Csv => csv_rows(&rows),
    }
}

#[derive(Serialize)]
struct PercolationSummary {
    kind: PercolationKind,
    model: Model,
    n: usize,
    reps: usize,
    seed: u64,
    pi: f64,
    /// Mean of the largest component as a fraction of `n`.
    mean_frac: f64,
    /// `n Var(size / n)`.
    sigma2_hat: f64,
}

#[derive(Serialize)]
struct PercolationReport {
    summary: PercolationSummary,
    theory: Option<TheoryResult>,
    /// Counts of each largest-component size `0..=n`.
    histogram: Vec<u64>,
}

#[derive(Serialize)]
struct SizeRow {
    rep: usize,
    size: usize,
}

pub fn percolate(args: &PercolateArgs, format: Format, exec: Execution) -> CliResult<Vec<u8>> {
    let dist = degree(&args.degree)?;
    let m = model(args.model);
    let kind = match args.kind {
        KindArg::Bond => PercolationKind::Bond,
        KindArg::Site => PercolationKind::Site,
    };
    let sizes = percolation_ensemble(
        kind,
        m,
        &dist,
        args.n,
        args.pi,
        args.reps as usize,
        args.seed,
        exec,
    )?;
    if format == Format::Csv {
        return csv_rows(sizes.iter().enumerate().map(|(rep, &size)| SizeRow { rep, size }));
    }
    let frac: Vec<f64> = sizes.iter().map(|&s| s as f64 / args.n as f64).collect();
    let (mean_frac, var) = mean_var(&frac);
    let theory = if args.pi >= 1.0 {
        giant_component_theory(m, &dist).ok()
    } else {
        percolation_theory(kind, m, &dist, args.pi).ok()
    };
    json(&PercolationReport {
        summary: PercolationSummary {
            kind,
            model: m,
            n: args.n,
            reps: sizes.len(),
            seed: args.seed,
            pi: args.pi,
            mean_frac,
            sigma2_hat: var * args.n as f64,
        },
        theory,
        histogram: histogram(sizes.iter().copied(), args.n + 1),
    })
}

#[derive(Serialize)]
struct QuadratureRow {
    model: Model,
    degree: String,
    analysis: String,
    period: PeriodKind,
    #[serde(rename = "pI")]
    p_i: f64,
    eps: f64,
    closed_form: f64,
    quadrature: f64,
    rel_err: f64,
    passed: bool,
}

/// Runs the oracle suite. The report is returned even when checks fail, so
/// it can be written before the failure is signalled.
pub fn verify(
    args: &VerifyArgs,
    format: Format,
    exec: Execution,
) -> CliResult<(Vec<u8>, Vec<String>)> {
    let mut config = VerifyConfig {
        enumeration_reps: args.enum_reps,
        seed: args.seed,
        exec,
        perturb: args.perturb,
        ..VerifyConfig::default()
    };
    if args.empty_grid {
        config.grid.clear();
        config.fluid.clear();
        config.enumeration.clear();
    }
    let report = run_verification(&config);
    if report.is_empty() {
        eprintln!("warning: verification grid is empty; nothing was checked");
    }
    let bytes = match format {
        Format::Json => json(&report)?,
        Format::Csv => csv_rows(report.quadrature.iter().map(|r| QuadratureRow {
            model: r.params.model,
            degree: r.params.degree.clone(),
            analysis: format!("{:?}", r.params.analysis).to_lowercase(),
            period: r.params.period,
            p_i: r.params.p_i,
            eps: r.params.eps,
            closed_form: r.closed_form,
            quadrature: r.quadrature,
            rel_err: r.rel_err,
            passed: r.passed,
        }))?,
    };
    Ok((bytes, report.failures))
}
