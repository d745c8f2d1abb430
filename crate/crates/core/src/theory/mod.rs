//! Closed-form asymptotics of the final size: the final-size root `z`, the
//! limiting fraction `rho`, `R0`, the major-outbreak probability and the
//! central-limit variances for epidemics, percolation and giant components.

mod kernel;
mod outbreak;

use serde::Serialize;

use crate::distributions::{
    DegreeDistribution, GeneratingFunction, InfectiousPeriod, TransmissionParams,
};
use crate::error::{Error, Result};
pub use crate::graph::{Model, PercolationKind};

pub use kernel::{h_value, mr_variance, nsw_variance, site_variance, solve_z, RootRegime};
pub use outbreak::{major_outbreak_prob, major_outbreak_prob_for_period};

/// Which limit theorem a result belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// A positive fraction initially infective.
    PositiveFraction,
    /// Few initial infectives, conditioned on a major outbreak.
    ConditionalMajor,
    Percolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Epidemic,
    Bond,
    Site,
    Giant,
}

/// Asymptotic mean and variance of the final size (or component size) per `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryResult {
    pub regime: Regime,
    pub z: f64,
    pub tau: f64,
    pub rho: f64,
    pub h: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    #[serde(rename = "pC")]
    pub p_c: f64,
    #[serde(rename = "pmaj")]
    pub p_maj: Option<f64>,
    pub sigma2: f64,
    /// `"<model>-<analysis>"`, e.g. `NSW-epidemic`.
    pub variant: String,
    pub residual: f64,
    /// Limit of `T/n`: `rho`, or `pi rho` for site percolation.
    pub mean: f64,
    #[serde(rename = "pI")]
    pub p_i: f64,
    pub eps: f64,
}

/// `R0 = (mu + sigma^2/mu - 1) p_I`.
pub fn basic_reproduction_number(dist: &DegreeDistribution, p_i: f64) -> Result<f64> {
    if dist.mean() <= 0.0 {
        return Err(Error::InvalidDistribution("mean degree is zero".into()));
    }
    Ok(dist.excess_mean() * p_i)
}

/// `p_C = 1 / mu~`, infinite when the excess mean degree is zero.
pub fn critical_probability(dist: &DegreeDistribution) -> f64 {
    1.0 / dist.excess_mean()
}

fn variant(model: Model, analysis: Analysis) -> String {
    let a = serde_json::to_value(analysis).expect("serializable");
    format!("{model}-{}", a.as_str().expect("string tag"))
}

fn check_transmission(tp: &TransmissionParams) -> Result<()> {
    if !(tp.p_i > 0.0) {
        return Err(Error::ConditionViolated(
            "transmission probability is zero; no spread is possible".into(),
        ));
    }
    Ok(())
}

/// Theorem for a positive initially infective fraction `eps = sum eps_i`.
///
/// NSW requires `eps_i = eps p_i`.
pub fn epidemic_theory_positive(
    model: Model,
    dist: &DegreeDistribution,
    eps_per_degree: &[f64],
    period: &InfectiousPeriod,
    lambda: f64,
) -> Result<TheoryResult> {
    let tp = period.transmission_params(lambda)?;
    let mut res = positive_with_params(model, dist, eps_per_degree, tp)?;
    res.p_maj = major_outbreak_prob_for_period(dist, period, lambda)?;
    Ok(res)
}

/// [`epidemic_theory_positive`] with `eps_i = eps p_i`.
pub fn epidemic_theory_positive_uniform(
    model: Model,
    dist: &DegreeDistribution,
    eps: f64,
    period: &InfectiousPeriod,
    lambda: f64,
) -> Result<TheoryResult> {
    let eps_i: Vec<f64> = dist.pmf().iter().map(|p| eps * p).collect();
    epidemic_theory_positive(model, dist, &eps_i, period, lambda)
}

pub fn positive_with_params(
    model: Model,
    dist: &DegreeDistribution,
    eps_per_degree: &[f64],
    tp: TransmissionParams,
) -> Result<TheoryResult> {
    check_transmission(&tp)?;
    let reduced = dist.reduced(eps_per_degree)?;
    let eps = reduced.epsilon();
    if !(eps > 0.0) || !eps_per_degree.iter().skip(1).any(|&e| e > 0.0) {
        return Err(Error::ConditionViolated(
            "need eps_i > 0 for some degree i > 0".into(),
        ));
    }
    if tp.p_i >= 1.0 && dist.prob(1) - eps_per_degree.get(1).copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::ConditionViolated(
            "p_I = 1 requires susceptibles of degree 1".into(),
        ));
    }
    if model == Model::NewmanStrogatzWatts {
        let proportional = dist
            .pmf()
            .iter()
            .enumerate()
            .all(|(i, p)| (eps_per_degree.get(i).copied().unwrap_or(0.0) - eps * p).abs() <= 1e-12);
        if !proportional {
            return Err(Error::ConditionViolated(
                "NSW initial infectives must be chosen at random (eps_i = eps p_i)".into(),
            ));
        }
    }
    let mu = dist.mean();
    let z = solve_z(&reduced, tp.p_i, tp.q_i, mu, RootRegime::PositiveFraction)?;
    let rho = 1.0 - eps - reduced.eval(z);
    let (h, sigma2) = match model {
        Model::MolloyReed => mr_variance(dist, &reduced, tp, z)?,
        Model::NewmanStrogatzWatts => nsw_variance(dist, eps, tp, z)?,
    };
    Ok(TheoryResult {
        regime: Regime::PositiveFraction,
        z,
        tau: -z.ln(),
        rho,
        h,
        r0: dist.excess_mean() * tp.p_i,
        p_c: critical_probability(dist),
        p_maj: None,
        sigma2,
        variant: variant(model, Analysis::Epidemic),
        residual: tp.p_i * reduced.derivative(z, 1) - mu * (z - tp.q_i),
        mean: rho,
        p_i: tp.p_i,
        eps,
    })
}

/// Few initial infectives, conditional on a major outbreak (or infinitely many
/// initial infectives forming a vanishing fraction).
pub fn epidemic_theory_major(
    model: Model,
    dist: &DegreeDistribution,
    period: &InfectiousPeriod,
    lambda: f64,
) -> Result<TheoryResult> {
    let tp = period.transmission_params(lambda)?;
    let mut res = major_with_params(model, dist, tp, Analysis::Epidemic)?;
    res.p_maj = major_outbreak_prob_for_period(dist, period, lambda)?;
    Ok(res)
}

pub fn major_with_params(
    model: Model,
    dist: &DegreeDistribution,
    tp: TransmissionParams,
    analysis: Analysis,
) -> Result<TheoryResult> {
    check_transmission(&tp)?;
    let r0 = basic_reproduction_number(dist, tp.p_i)?;
    if r0 <= 1.0 {
        return Err(Error::Subcritical { r0 });
    }
    if tp.p_i >= 1.0 && dist.prob(1) <= 0.0 {
        return Err(Error::ConditionViolated(
            "p_I = 1 requires p_1 > 0".into(),
        ));
    }
    let mu = dist.mean();
    let f = dist.unreduced();
    let z = solve_z(&f, tp.p_i, tp.q_i, mu, RootRegime::ExcludeOne)?;
    let rho = 1.0 - dist.eval(z);
    let (h, sigma2) = match model {
        Model::MolloyReed => mr_variance(dist, &f, tp, z)?,
        Model::NewmanStrogatzWatts => nsw_variance(dist, 0.0, tp, z)?,
    };
    let p_maj = if tp.q_i2 == tp.q_i * tp.q_i {
        Some(major_outbreak_prob(dist, tp.p_i))
    } else {
        None
    };
    Ok(TheoryResult {
        regime: Regime::ConditionalMajor,
        z,
        tau: -z.ln(),
        rho,
        h,
        r0,
        p_c: critical_probability(dist),
        p_maj,
        sigma2,
        variant: variant(model, analysis),
        residual: tp.p_i * dist.derivative(z, 1) - mu * (z - tp.q_i),
        mean: rho,
        p_i: tp.p_i,
        eps: 0.0,
    })
}

/// Largest component after bond or site percolation with retention probability `pi`.
pub fn percolation_theory(
    kind: PercolationKind,
    model: Model,
    dist: &DegreeDistribution,
    pi: f64,
) -> Result<TheoryResult> {
    if !(pi > 0.0 && pi < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "retention probability must lie in (0, 1), got {pi}"
        )));
    }
    let analysis = match kind {
        PercolationKind::Bond => Analysis::Bond,
        PercolationKind::Site => Analysis::Site,
    };
    let mut res = major_with_params(model, dist, TransmissionParams::constant(pi), analysis)?;
    res.regime = Regime::Percolation;
    if kind == PercolationKind::Site {
        res.sigma2 = site_variance(res.sigma2, dist, pi, res.z, res.h, res.rho);
        res.mean = pi * res.rho;
        res.p_maj = None;
    }
    Ok(res)
}

/// Giant component of the unpercolated graph.
pub fn giant_component_theory(model: Model, dist: &DegreeDistribution) -> Result<TheoryResult> {
    major_with_params(model, dist, TransmissionParams::constant(1.0), Analysis::Giant)
}

#[cfg(test)]
mod tests;
