use serde::Serialize;

use super::enumerate::{enumerate_final_size, EnumerationPeriod};
use super::fluid::{fluid_consistency_check, FluidReport};
use super::variance::{
    site_variance_by_quadrature, variance_by_quadrature, variance_by_quadrature_direct,
};
use crate::distributions::{
    parse_degree_spec, DegreeDistribution, InfectiousPeriod, PeriodKind, TransmissionParams,
};
use crate::epidemic::{run_ensemble, EpidemicSetup, Initial};
use crate::error::Result;
use crate::graph::{DegreeSequence, Model, PercolationKind};
use crate::parallel::{map_indexed, Execution};
use crate::stats::{chi_square_gof, histogram, ChiSquareResult};
use crate::theory::{
    critical_probability, giant_component_theory, major_with_params, percolation_theory,
    positive_with_params, Analysis, TheoryResult,
};

/// Largest accepted relative gap between quadrature and closed form.
pub const QUADRATURE_REL_TOL: f64 = 1e-6;
const FLUID_TOL: f64 = 1e-8;
const ENUMERATION_MIN_P: f64 = 1e-3;

/// One parameter set of the quadrature grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub model: Model,
    pub degree: String,
    pub analysis: Analysis,
    pub period: PeriodKind,
    /// Transmission probability, or retention probability for percolation.
    #[serde(rename = "pI")]
    pub p_i: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRecord {
    pub params: GridPoint,
    pub closed_form: f64,
    pub quadrature: f64,
    /// Per-transition integrand; absent for site percolation, whose quadrature
    /// already uses that form.
    pub direct: Option<f64>,
    pub rel_err: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FluidRecord {
    pub params: GridPoint,
    pub report: FluidReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationCase {
    pub degrees: Vec<usize>,
    pub period: EnumerationPeriod,
    pub initial: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationRecord {
    pub degrees: Vec<usize>,
    pub period: String,
    pub initial: usize,
    pub exact: Vec<f64>,
    pub observed: Vec<u64>,
    pub chi_square: ChiSquareResult,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub grid: Vec<GridPoint>,
    pub fluid: Vec<GridPoint>,
    pub enumeration: Vec<EnumerationCase>,
    pub enumeration_reps: usize,
    pub seed: u64,
    pub exec: Execution,
    /// Relative shift applied to every closed-form variance; nonzero values
    /// exercise the failure path.
    pub perturb: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: default_grid(),
            fluid: table_points(),
            enumeration: default_enumeration_cases(),
            enumeration_reps: 100_000,
            seed: 1,
            exec: Execution::Parallel,
            perturb: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub quadrature: Vec<QuadratureRecord>,
    pub fluid: Vec<FluidRecord>,
    pub enumeration: Vec<EnumerationRecord>,
    /// One line per failed check, or per check that could not be evaluated.
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.quadrature.is_empty() && self.fluid.is_empty() && self.enumeration.is_empty()
    }
}

const FAMILIES: [&str; 4] = ["const:5", "poisson:5", "geom:0.16666666666666666", "power:1:13.796"];

/// The four degree families at NSW, `eps = 0.05`, `p_I = 0.3`, both periods.
fn table_points() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for degree in FAMILIES {
        for period in [PeriodKind::Constant, PeriodKind::ZeroOrInfinity] {
            out.push(GridPoint {
                model: Model::NewmanStrogatzWatts,
                degree: degree.into(),
                analysis: Analysis::Epidemic,
                period,
                p_i: 0.3,
                eps: 0.05,
            });
        }
    }
    out
}

/// Both models, all four families, both periods, `eps` in {0, 0.01, 0.05, 0.2}
/// and `p_I` in {p_C + 0.05, 0.5, 0.9}, plus bond, site and giant-component points.
pub fn default_grid() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for model in [Model::MolloyReed, Model::NewmanStrogatzWatts] {
        for degree in FAMILIES {
            let dist = parse_degree_spec(degree).expect("built-in degree spec");
            let p_c = critical_probability(&dist);
            let mut ps = vec![p_c + 0.05, 0.5, 0.9];
            ps.retain(|&p| p < 1.0);
            ps.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            for period in [PeriodKind::Constant, PeriodKind::ZeroOrInfinity] {
                for eps in [0.0, 0.01, 0.05, 0.2] {
                    for &p_i in &ps {
                        out.push(GridPoint {
                            model,
                            degree: degree.into(),
                            analysis: Analysis::Epidemic,
                            period,
                            p_i,
                            eps,
                        });
                    }
                }
            }
            for analysis in [Analysis::Bond, Analysis::Site] {
                for pi in [p_c + 0.05, 0.5] {
                    out.push(GridPoint {
                        model,
                        degree: degree.into(),
                        analysis,
                        period: PeriodKind::Constant,
                        p_i: pi,
                        eps: 0.0,
                    });
                }
            }
            if dist.prob(1) > 0.0 {
                out.push(GridPoint {
                    model,
                    degree: degree.into(),
                    analysis: Analysis::Giant,
                    period: PeriodKind::Constant,
                    p_i: 1.0,
                    eps: 0.0,
                });
            }
        }
    }
    out
}

fn transmission(point: &GridPoint) -> Result<TransmissionParams> {
    let (period, lambda) = InfectiousPeriod::matched(point.period, point.p_i)?;
    period.transmission_params(lambda)
}

/// Closed-form result plus the degree distribution and pgf data behind it.
fn closed_form(point: &GridPoint, dist: &DegreeDistribution) -> Result<(TheoryResult, Vec<f64>)> {
    let model = point.model;
    Ok(match point.analysis {
        Analysis::Epidemic if point.eps > 0.0 => {
            let eps_i: Vec<f64> = dist.pmf().iter().map(|p| point.eps * p).collect();
            (positive_with_params(model, dist, &eps_i, transmission(point)?)?, eps_i)
        }
        Analysis::Epidemic => (
            major_with_params(model, dist, transmission(point)?, Analysis::Epidemic)?,
            Vec::new(),
        ),
        Analysis::Bond => (
            percolation_theory(PercolationKind::Bond, model, dist, point.p_i)?,
            Vec::new(),
        ),
        Analysis::Site => (
            percolation_theory(PercolationKind::Site, model, dist, point.p_i)?,
            Vec::new(),
        ),
        Analysis::Giant => (giant_component_theory(model, dist)?, Vec::new()),
    })
}

fn params_for(point: &GridPoint) -> Result<TransmissionParams> {
    match point.analysis {
        Analysis::Epidemic => transmission(point),
        Analysis::Bond | Analysis::Site => Ok(TransmissionParams::constant(point.p_i)),
        Analysis::Giant => Ok(TransmissionParams::constant(1.0)),
    }
}

/// Quadrature against closed form at one grid point.
pub fn quadrature_check(point: &GridPoint, perturb: f64) -> Result<QuadratureRecord> {
    let dist = parse_degree_spec(&point.degree)?;
    let (theory, eps_i) = closed_form(point, &dist)?;
    let closed = theory.sigma2 * (1.0 + perturb);
    let (quadrature, direct) = if point.analysis == Analysis::Site {
        let q = site_variance_by_quadrature(point.model, &dist, point.p_i, theory.z)?;
        (q.sigma2, None)
    } else {
        let f = if eps_i.is_empty() {
            dist.unreduced()
        } else {
            dist.reduced(&eps_i)?
        };
        let tp = params_for(point)?;
        let q = variance_by_quadrature(point.model, &dist, &f, tp, theory.z)?;
        let d = variance_by_quadrature_direct(point.model, &dist, &f, tp, theory.z)?;
        (q.sigma2, Some(d.sigma2))
    };
    let rel = |x: f64| (x - closed).abs() / closed.abs();
    let rel_err = direct.map_or(rel(quadrature), |d| rel(quadrature).max(rel(d)));
    Ok(QuadratureRecord {
        params: point.clone(),
        closed_form: closed,
        quadrature,
        direct,
        rel_err,
        passed: rel_err <= QUADRATURE_REL_TOL,
    })
}

fn fluid_check(point: &GridPoint) -> Result<FluidRecord> {
    let dist = parse_degree_spec(&point.degree)?;
    let (theory, eps_i) = closed_form(point, &dist)?;
    let f = if eps_i.is_empty() {
        dist.unreduced()
    } else {
        dist.reduced(&eps_i)?
    };
    let report = fluid_consistency_check(&dist, &f, params_for(point)?, theory.z);
    Ok(FluidRecord {
        params: point.clone(),
        passed: report.passes(FLUID_TOL),
        report,
    })
}

/// Small instances, all with total degree at most 8.
pub fn default_enumeration_cases() -> Vec<EnumerationCase> {
    let shapes: [&[usize]; 8] = [
        &[1, 1],
        &[2, 2],
        &[1, 1, 1, 1],
        &[3, 1, 1, 1],
        &[2, 2, 1],
        &[2, 2, 2],
        &[3, 2, 2, 1],
        &[2, 2, 1, 1, 1, 1],
    ];
    let mut out = Vec::new();
    for degrees in shapes {
        for period in [
            EnumerationPeriod::Constant(0.6),
            EnumerationPeriod::ZeroOrInfinity(0.6),
        ] {
            out.push(EnumerationCase {
                degrees: degrees.to_vec(),
                period,
                initial: 0,
            });
        }
    }
    out
}

fn period_label(period: EnumerationPeriod) -> String {
    match period {
        EnumerationPeriod::Constant(p) => format!("const(pI={p})"),
        EnumerationPeriod::ZeroOrInfinity(p) => format!("zeroinf(pI={p})"),
    }
}

/// Simulator frequencies on a fixed tiny degree sequence against the exact pmf.
pub fn enumeration_check(
    case: &EnumerationCase,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<EnumerationRecord> {
    let exact = enumerate_final_size(&case.degrees, case.period, case.initial)?;
    let seq = DegreeSequence::new(case.degrees.clone());
    let counts = seq.counts();
    let n = case.degrees.len();
    let pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let (kind, p) = match case.period {
        EnumerationPeriod::Constant(p) => (PeriodKind::Constant, p),
        EnumerationPeriod::ZeroOrInfinity(p) => (PeriodKind::ZeroOrInfinity, p),
    };
    let (period, lambda) = InfectiousPeriod::matched(kind, p)?;
    let mut initial = vec![0usize; seq.max_degree() + 1];
    initial[case.degrees[case.initial]] = 1;
    let setup = EpidemicSetup::new(
        Model::MolloyReed,
        n,
        DegreeDistribution::from_pmf(pmf)?,
        period,
        lambda,
    )
    .with_degree_sequence(seq)
    .with_initial(Initial::Count {
        a: 1,
        per_degree: Some(initial),
    });
    let result = run_ensemble(&setup, reps, seed, exec)?;
    let observed = histogram(result.records.iter().map(|r| r.t), exact.len());
    let chi_square = chi_square_gof(&observed, &exact);
    Ok(EnumerationRecord {
        degrees: case.degrees.clone(),
        period: period_label(case.period),
        initial: case.initial,
        exact,
        observed,
        passed: chi_square.p_value > ENUMERATION_MIN_P,
        chi_square,
    })
}

/// Runs every configured check; grid points are evaluated concurrently.
pub fn run_verification(config: &VerifyConfig) -> VerifyReport {
    let mut failures = Vec::new();
    let quad = map_indexed(config.grid.len(), config.exec, |k| {
        quadrature_check(&config.grid[k], config.perturb)
    });
    let mut quadrature = Vec::new();
    for (point, r) in config.grid.iter().zip(quad) {
        match r {
            Ok(rec) => {
                if !rec.passed {
                    failures.push(format!(
                        "quadrature {point:?}: closed form {:.12} vs quadrature {:.12} (rel err {:.3e})",
                        rec.closed_form, rec.quadrature, rec.rel_err
                    ));
                }
                quadrature.push(rec);
            }
            Err(e) => failures.push(format!("quadrature {point:?}: {e}")),
        }
    }
    let mut fluid = Vec::new();
    for point in &config.fluid {
        match fluid_check(point) {
            Ok(rec) => {
                if !rec.passed {
                    failures.push(format!("fluid {point:?}: {:?}", rec.report));
                }
                fluid.push(rec);
            }
            Err(e) => failures.push(format!("fluid {point:?}: {e}")),
        }
    }
    let mut enumeration = Vec::new();
    for (k, case) in config.enumeration.iter().enumerate() {
        let seed = config.seed.wrapping_add(k as u64);
        match enumeration_check(case, config.enumeration_reps, seed, config.exec) {
            Ok(rec) => {
                if !rec.passed {
                    failures.push(format!(
                        "enumeration {:?} {}: chi-square p = {:.3e}",
                        rec.degrees, rec.period, rec.chi_square.p_value
                    ));
                }
                enumeration.push(rec);
            }
            Err(e) => failures.push(format!("enumeration {case:?}: {e}")),
        }
    }
    VerifyReport {
        quadrature,
        fluid,
        enumeration,
        failures,
    }
}
