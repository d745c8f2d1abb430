use crate::distributions::{DegreeDistribution, GeneratingFunction, ReducedPgf, TransmissionParams};
use crate::error::{Error, Result};

/// Which root of `G(s) = p_I f'(s) - mu (s - q_I)` is wanted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootRegime {
    /// `G(1) < 0`: the unique root in `[0, 1)`.
    PositiveFraction,
    /// `G(1) = 0`: the root in `(0, 1)` other than `s = 1`.
    ExcludeOne,
}

const BISECT_TOL: f64 = 1e-13;
const NEAR_CRITICAL: f64 = 1e-9;

/// Solves `z - q_I = p_I f'(z) / mu`.
pub fn solve_z<G: GeneratingFunction>(
    f: &G,
    p_i: f64,
    q_i: f64,
    mu: f64,
    regime: RootRegime,
) -> Result<f64> {
    let g = |s: f64| p_i * f.derivative(s, 1) - mu * (s - q_i);
    let g0 = g(0.0);
    if g0 <= 0.0 {
        if g0 == 0.0 {
            return Err(Error::ConditionViolated(
                "final-size equation has its root at z = 0".into(),
            ));
        }
        return Err(Error::ConditionViolated(format!("G(0) = {g0} is negative")));
    }
    let (mut lo, mut hi) = match regime {
        RootRegime::PositiveFraction => {
            let g1 = g(1.0);
            if g1 >= 0.0 {
                return Err(Error::ConditionViolated(format!(
                    "G(1) = {g1} is not negative; no root in [0, 1)"
                )));
            }
            (0.0, 1.0)
        }
        RootRegime::ExcludeOne => {
            let mut prev = 0.0;
            let mut bracket = None;
            for k in 1..=52 {
                let s = 1.0 - 0.5f64.powi(k);
                if g(s) < 0.0 {
                    bracket = Some((prev, s));
                    break;
                }
                prev = s;
            }
            bracket.ok_or(Error::NearCritical {
                denominator: 1.0 - p_i * f.derivative(1.0, 2) / mu,
            })?
        }
    };
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    let slope = p_i * f.derivative(z, 2) - mu;
    if slope != 0.0 {
        let polished = z - g(z) / slope;
        if polished >= lo - BISECT_TOL && polished <= hi + BISECT_TOL && g(polished).abs() <= g(z).abs() {
            z = polished;
        }
    }
    Ok(z)
}

/// `h(z) = (q_I - z) / (p_I (1 - p_I f''(z) / mu))`, where `f2z` is the
/// relevant second derivative at `z`.
pub fn h_value(p_i: f64, q_i: f64, mu: f64, z: f64, f2z: f64) -> Result<f64> {
    let denominator = 1.0 - p_i * f2z / mu;
    if denominator.abs() < NEAR_CRITICAL {
        return Err(Error::NearCritical { denominator });
    }
    Ok((q_i - z) / (p_i * denominator))
}

/// `(h, sigma^2)` for the MR graph with reduced pgf `f` (pass the unreduced
/// pgf for the conditional-major and percolation limits).
pub fn mr_variance(
    dist: &DegreeDistribution,
    f: &ReducedPgf,
    tp: TransmissionParams,
    z: f64,
) -> Result<(f64, f64)> {
    let TransmissionParams { p_i: p, q_i: q, q_i2: q2 } = tp;
    let mu = dist.mean();
    let eps = f.epsilon();
    let rho = 1.0 - eps - f.eval(z);
    let h = h_value(p, q, mu, z, f.derivative(z, 2))?;
    let z2 = z * z;
    let f1z2 = f.derivative(z2, 1);
    let sigma2 = h * h * ((p * q + 2.0 * (z - q).powi(2)) * mu - p * p * (f1z2 + z2 * f.derivative(z2, 2)))
        + h * (2.0 * p * z * f1z2 - (z - q) * mu)
        + 1.0
        - eps
        - rho
        - f.eval(z2)
        + (q2 - q * q) * h * h * (dist.derivative(1.0, 2) - f.derivative(z, 2));
    Ok((h, sigma2))
}

/// `(h, sigma^2)` for the NSW graph with initial fraction `eps` chosen at random.
pub fn nsw_variance(
    dist: &DegreeDistribution,
    eps: f64,
    tp: TransmissionParams,
    z: f64,
) -> Result<(f64, f64)> {
    let TransmissionParams { p_i: p, q_i: q, q_i2: q2 } = tp;
    let mu = dist.mean();
    let var = dist.variance();
    let rho = 1.0 - eps - (1.0 - eps) * dist.eval(z);
    let f2z = dist.derivative(z, 2);
    let h = h_value(p, q, mu, z, (1.0 - eps) * f2z)?;
    let sigma2 = rho * (1.0 - eps - rho) / (1.0 - eps)
        - h * (z - q) * (1.0 - 2.0 * eps + 2.0 * eps * rho / (1.0 - eps)) * mu
        + h * h
            * ((p * q - 2.0 * z * (z - q)) * mu
                + (z - q).powi(2) * (var + (1.0 - 2.0 * eps) / (1.0 - eps) * mu * mu))
        + (q2 - q * q) * h * h * (dist.derivative(1.0, 2) - (1.0 - eps) * f2z);
    Ok((h, sigma2))
}

/// Site-percolation variance from the bond variance at the same `pi`.
pub fn site_variance(
    bond_sigma2: f64,
    dist: &DegreeDistribution,
    pi: f64,
    z: f64,
    h: f64,
    rho: f64,
) -> f64 {
    let mu = dist.mean();
    let spread = dist.derivative(1.0, 2) - dist.derivative(z, 2);
    pi * pi * (bond_sigma2 + pi * (1.0 - pi) * h * h * spread)
        + pi * (1.0 - pi) * (rho - 2.0 * h * (1.0 - z) * mu)
}
