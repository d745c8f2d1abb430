use crate::distributions::{DegreeDistribution, GeneratingFunction, InfectiousPeriod};
use crate::error::Result;
use crate::quadrature::integrate_default;

const FIXED_POINT_TOL: f64 = 1e-13;
const MAX_ITER: usize = 100_000;

/// Smallest fixed point in `[0, 1]` of the nondecreasing map `g`, by iteration from 0.
fn smallest_fixed_point(g: impl Fn(f64) -> f64) -> f64 {
    let mut s = 0.0;
    for _ in 0..MAX_ITER {
        let next = g(s).min(1.0);
        if (next - s).abs() < FIXED_POINT_TOL {
            return next;
        }
        s = next;
    }
    s
}

/// Survival probability of the branching approximation with offspring
/// `Bin(D~ - 1, p_I)`, started from one individual of degree `D`.
pub fn major_outbreak_prob(dist: &DegreeDistribution, p_i: f64) -> f64 {
    let mu = dist.mean();
    if mu <= 0.0 || dist.excess_mean() * p_i <= 1.0 {
        return 0.0;
    }
    let q = 1.0 - p_i;
    let xi = smallest_fixed_point(|s| dist.derivative(q + p_i * s, 1) / mu);
    1.0 - dist.eval(q + p_i * xi)
}

/// Major-outbreak probability when all contacts of one infective share its
/// infectious period: offspring generating function
/// `E_I[f'(1 - P + P s)] / mu` with `P = 1 - exp(-lambda I)`.
///
/// Closed form for constant and zero-or-infinite periods, quadrature over the
/// exponential law, and `None` for custom periods.
pub fn major_outbreak_prob_for_period(
    dist: &DegreeDistribution,
    period: &InfectiousPeriod,
    lambda: f64,
) -> Result<Option<f64>> {
    let mu = dist.mean();
    let tp = period.transmission_params(lambda)?;
    if mu <= 0.0 || dist.excess_mean() * tp.p_i <= 1.0 {
        return Ok(Some(0.0));
    }
    Ok(match period {
        InfectiousPeriod::Constant(_) => Some(major_outbreak_prob(dist, tp.p_i)),
        InfectiousPeriod::ZeroOrInfinity(pi) => {
            let xi = smallest_fixed_point(|s| (1.0 - pi) + pi * dist.derivative(s, 1) / mu);
            Some(pi * (1.0 - dist.eval(xi)))
        }
        InfectiousPeriod::Exponential(gamma) => {
            // I = -ln(u)/gamma with u uniform, so exp(-lambda I) = u^(lambda/gamma)
            let r = lambda / gamma;
            let mix = |k: u32, s: f64| -> Result<f64> {
                integrate_default(
                    |u| {
                        let keep = u.powf(r);
                        dist.derivative(keep + (1.0 - keep) * s, k)
                    },
                    0.0,
                    1.0,
                )
            };
            let mut s = 0.0;
            for _ in 0..MAX_ITER {
                let next = (mix(1, s)? / mu).min(1.0);
                if (next - s).abs() < FIXED_POINT_TOL {
                    s = next;
                    break;
                }
                s = next;
            }
            Some(1.0 - mix(0, s)?)
        }
        InfectiousPeriod::Custom(_) => None,
    })
}
