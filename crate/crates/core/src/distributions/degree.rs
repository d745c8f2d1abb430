use serde::Serialize;

use crate::error::{Error, Result};

/// Tail mass discarded when truncating an unbounded degree family.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

const MAX_SUPPORT: usize = 10_000_000;

/// `i (i-1) ... (i-k+1)`, with the empty product equal to one.
#[inline]
pub fn falling_factorial(i: usize, k: u32) -> f64 {
    (0..k as usize).fold(1.0, |acc, j| {
        if j > i {
            0.0
        } else {
            acc * (i - j) as f64
        }
    })
}

/// k-th derivative of the power series with coefficients `coeffs`, evaluated at `s`.
///
/// Exact finite sum `sum_{i>=k} i_[k] c_i s^(i-k)`, evaluated by Horner's rule.
pub fn pgf_derivative(coeffs: &[f64], s: f64, k: u32) -> f64 {
    let k = k as usize;
    if coeffs.len() <= k {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in (k..coeffs.len()).rev() {
        acc = acc * s + falling_factorial(i, k as u32) * coeffs[i];
    }
    acc
}

/// Polylogarithm `Li_order(x) = sum_{k>=1} k^(-order) x^k` for `0 <= x < 1`,
/// summed until the remaining geometric tail is negligible.
pub fn polylog(order: f64, x: f64) -> f64 {
    assert!((0.0..1.0).contains(&x), "polylog series needs 0 <= x < 1");
    if x == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        let term = (-order * kf.ln() + kf * x.ln()).exp();
        sum += term;
        // once terms decrease, the remainder is bounded by term * x / (1 - x)
        let ratio = x * (kf / (kf + 1.0)).powf(order);
        if ratio < 1.0 && term * x / (1.0 - x) <= 1e-17 * sum.abs() {
            break;
        }
        k += 1;
        if k > MAX_SUPPORT {
            break;
        }
    }
    sum
}

/// Anything exposing power-series coefficients on `[0, 1]`.
pub trait GeneratingFunction {
    fn coefficients(&self) -> &[f64];

    fn derivative(&self, s: f64, k: u32) -> f64 {
        pgf_derivative(self.coefficients(), s, k)
    }

    fn eval(&self, s: f64) -> f64 {
        self.derivative(s, 0)
    }

    fn total_mass(&self) -> f64 {
        self.coefficients().iter().sum()
    }
}

/// A degree distribution with finite support `0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDistribution {
    pmf: Vec<f64>,
    mean: f64,
    variance: f64,
    excess_mean: f64,
}

impl DegreeDistribution {
    /// Builds from an explicit pmf. Mass must sum to one within `1e-9`; the
    /// vector is renormalized and trailing zeros are trimmed.
    pub fn from_pmf(mut pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidDistribution("empty pmf".into()));
        }
        if let Some(bad) = pmf.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities must be finite and nonnegative, got {bad}"
            )));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        while pmf.len() > 1 && *pmf.last().unwrap() == 0.0 {
            pmf.pop();
        }
        pmf.iter_mut().for_each(|p| *p /= total);
        Ok(Self::from_normalized(pmf))
    }

    fn from_normalized(pmf: Vec<f64>) -> Self {
        let mean: f64 = pmf.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
        let variance: f64 = pmf
            .iter()
            .enumerate()
            .map(|(i, p)| (i as f64 - mean).powi(2) * p)
            .sum();
        let excess_mean = if mean > 0.0 {
            pmf.iter()
                .enumerate()
                .map(|(i, p)| (i as f64 - 1.0) * i as f64 * p)
                .sum::<f64>()
                / mean
        } else {
            0.0
        };
        Self {
            pmf,
            mean,
            variance,
            excess_mean,
        }
    }

    /// Point mass at `d`.
    pub fn constant(d: usize) -> Self {
        let mut pmf = vec![0.0; d + 1];
        pmf[d] = 1.0;
        Self::from_normalized(pmf)
    }

    /// Poisson(mean), truncated at the smallest support with tail mass below `tail_tol`.
    pub fn poisson(mean: f64, tail_tol: f64) -> Result<Self> {
        check_positive("Poisson mean", mean)?;
        check_tail_tol(tail_tol)?;
        let ln_mean = mean.ln();
        let mut weights = Vec::new();
        for k in 0..MAX_SUPPORT {
            let w = (-mean + k as f64 * ln_mean - statrs::function::gamma::ln_gamma(k as f64 + 1.0)).exp();
            weights.push(w);
            if k as f64 > mean && w < tail_tol * 1e-6 {
                break;
            }
        }
        Ok(Self::from_normalized(truncate_weights(weights, tail_tol)))
    }

    /// Geometric on `{0, 1, ...}` with `p_k = (1-p)^k p`, truncated.
    pub fn geometric(p: f64, tail_tol: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "geometric parameter must lie in (0, 1), got {p}"
            )));
        }
        check_tail_tol(tail_tol)?;
        let cutoff = ((tail_tol * 1e-6).ln() / (1.0 - p).ln()).ceil() as usize + 1;
        let weights: Vec<f64> = (0..cutoff.min(MAX_SUPPORT))
            .map(|k| (1.0 - p).powi(k as i32) * p)
            .collect();
        Ok(Self::from_normalized(truncate_weights(weights, tail_tol)))
    }

    /// Power law with exponential cut-off, `p_k ∝ k^(-alpha) e^(-k/kappa)` for `k >= 1`.
    ///
    /// The normalizer is the polylogarithm `Li_alpha(e^(-1/kappa))`, summed
    /// directly; truncation then drops the tail beyond `tail_tol`.
    pub fn power_cutoff(alpha: f64, kappa: f64, tail_tol: f64) -> Result<Self> {
        check_positive("power-law exponent", alpha)?;
        check_positive("cut-off scale", kappa)?;
        check_tail_tol(tail_tol)?;
        let theta = (-1.0 / kappa).exp();
        let normalizer = polylog(alpha, theta);
        let mut weights = vec![0.0];
        let mut partial = 0.0;
        for k in 1..MAX_SUPPORT {
            let kf = k as f64;
            let w = (-alpha * kf.ln() - kf / kappa).exp() / normalizer;
            weights.push(w);
            partial += w;
            if w * theta / (1.0 - theta) < tail_tol * 1e-6 * partial {
                break;
            }
        }
        Ok(Self::from_normalized(truncate_weights(weights, tail_tol)))
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn prob(&self, degree: usize) -> f64 {
        self.pmf.get(degree).copied().unwrap_or(0.0)
    }

    pub fn max_degree(&self) -> usize {
        self.pmf.len() - 1
    }

    /// `mu_D`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `sigma^2_D`.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Mean of `D~ - 1` where `D~` is the size-biased degree: `sum (i-1) i p_i / mu_D`.
    pub fn excess_mean(&self) -> f64 {
        self.excess_mean
    }

    /// `P(D~ = k) = k p_k / mu_D`.
    pub fn size_biased_pmf(&self) -> Vec<f64> {
        self.pmf
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 * p / self.mean)
            .collect()
    }

    /// `F_D(d) = P(D <= d)`.
    pub fn cdf(&self, d: usize) -> f64 {
        self.pmf.iter().take(d + 1).sum()
    }

    /// Reduced generating function with per-degree initial-infective fractions `eps_i`.
    pub fn reduced(&self, eps_per_degree: &[f64]) -> Result<ReducedPgf> {
        if eps_per_degree.len() > self.pmf.len() {
            return Err(Error::InvalidInitialCondition(format!(
                "{} per-degree fractions given for max degree {}",
                eps_per_degree.len(),
                self.max_degree()
            )));
        }
        let mut coeffs = self.pmf.clone();
        for (i, &e) in eps_per_degree.iter().enumerate() {
            if !(e >= 0.0) || e > self.pmf[i] + 1e-12 {
                return Err(Error::InvalidInitialCondition(format!(
                    "eps_{i} = {e} outside [0, p_{i} = {}]",
                    self.pmf[i]
                )));
            }
            coeffs[i] = (self.pmf[i] - e).max(0.0);
        }
        let epsilon = eps_per_degree.iter().sum();
        Ok(ReducedPgf { coeffs, epsilon })
    }

    /// Reduced generating function with `eps_i = eps p_i`.
    pub fn reduced_uniform(&self, eps: f64) -> Result<ReducedPgf> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidInitialCondition(format!(
                "eps = {eps} outside [0, 1]"
            )));
        }
        Ok(ReducedPgf {
            coeffs: self.pmf.iter().map(|p| (1.0 - eps) * p).collect(),
            epsilon: eps,
        })
    }

    /// The same distribution viewed as a reduced pgf with no initial infectives.
    pub fn unreduced(&self) -> ReducedPgf {
        ReducedPgf {
            coeffs: self.pmf.clone(),
            epsilon: 0.0,
        }
    }
}

impl GeneratingFunction for DegreeDistribution {
    fn coefficients(&self) -> &[f64] {
        &self.pmf
    }
}

/// `f_{D,eps}(s) = sum (p_i - eps_i) s^i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedPgf {
    coeffs: Vec<f64>,
    epsilon: f64,
}

impl ReducedPgf {
    /// Total initially infective fraction `eps`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `eps_i = p_i - (p_i - eps_i)` recovered against the full distribution.
    pub fn eps_per_degree(&self, full: &DegreeDistribution) -> Vec<f64> {
        full.pmf()
            .iter()
            .enumerate()
            .map(|(i, p)| p - self.coeffs.get(i).copied().unwrap_or(0.0))
            .collect()
    }
}

impl GeneratingFunction for ReducedPgf {
    fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!(
            "{what} must be positive and finite, got {v}"
        )))
    }
}

fn check_tail_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1e-6 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tail tolerance must lie in (0, 1e-6), got {tol}"
        )))
    }
}

/// Keeps the shortest prefix whose discarded tail (relative to the total) is
/// below `tol`, then renormalizes.
fn truncate_weights(weights: Vec<f64>, tol: f64) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut tail = 0.0;
    let mut cut = weights.len();
    // walk down from the top; `tail` is the mass strictly above index i
    for i in (0..weights.len()).rev() {
        if tail / total >= tol {
            break;
        }
        cut = i + 1;
        tail += weights[i];
    }
    let mut kept: Vec<f64> = weights[..cut].to_vec();
    let kept_total: f64 = kept.iter().sum();
    kept.iter_mut().for_each(|w| *w /= kept_total);
    kept
}
