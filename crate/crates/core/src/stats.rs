//! Summary statistics and chi-square tests for Monte Carlo checks.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Sample mean and unbiased variance; the variance of a single value is zero.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, ss / (n - 1) as f64)
}

fn upper_tail(statistic: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(df as f64)
        .expect("positive df")
        .cdf(statistic)
}

/// Merges runs of adjacent categories until every group's weight reaches
/// `MIN_EXPECTED`; a short final group is folded into its predecessor.
fn pool_groups(weights: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if acc >= MIN_EXPECTED {
            groups.push(start..k + 1);
            start = k + 1;
            acc = 0.0;
        }
    }
    if start < weights.len() {
        match groups.last_mut() {
            Some(last) => last.end = weights.len(),
            None => groups.push(0..weights.len()),
        }
    }
    groups
}

/// Goodness of fit of `observed` counts to category probabilities `probs`.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquareResult {
    let len = observed.len().max(probs.len());
    let total: u64 = observed.iter().sum();
    let obs = |k: usize| observed.get(k).copied().unwrap_or(0) as f64;
    let expected: Vec<f64> = (0..len)
        .map(|k| probs.get(k).copied().unwrap_or(0.0) * total as f64)
        .collect();
    let groups = pool_groups(&expected);
    let df = groups.len().saturating_sub(1);
    if (0..len).any(|k| expected[k] == 0.0 && obs(k) > 0.0) {
        return ChiSquareResult {
            statistic: f64::INFINITY,
            df,
            p_value: 0.0,
        };
    }
    let mut statistic = 0.0;
    for g in &groups {
        let e: f64 = g.clone().map(|k| expected[k]).sum();
        if e > 0.0 {
            statistic += (g.clone().map(obs).sum::<f64>() - e).powi(2) / e;
        }
    }
    ChiSquareResult {
        statistic,
        df,
        p_value: upper_tail(statistic, df),
    }
}

/// Two-sample homogeneity test on histograms over the same categories.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquareResult {
    let len = a.len().max(b.len());
    let get = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0) as f64;
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    let frac_small = na.min(nb) / (na + nb);
    // pooling on the smaller sample's expected count keeps both above the floor
    let weights: Vec<f64> = (0..len)
        .map(|k| (get(a, k) + get(b, k)) * frac_small)
        .collect();
    let groups = pool_groups(&weights);
    let mut statistic = 0.0;
    for g in &groups {
        let ga: f64 = g.clone().map(|k| get(a, k)).sum();
        let gb: f64 = g.clone().map(|k| get(b, k)).sum();
        let both = ga + gb;
        if both == 0.0 {
            continue;
        }
        let ea = both * na / (na + nb);
        let eb = both * nb / (na + nb);
        statistic += (ga - ea).powi(2) / ea + (gb - eb).powi(2) / eb;
    }
    let df = groups.len().saturating_sub(1);
    ChiSquareResult {
        statistic,
        df,
        p_value: upper_tail(statistic, df),
    }
}

/// Counts of each value in `0..len`.
pub fn histogram(values: impl IntoIterator<Item = usize>, len: usize) -> Vec<u64> {
    let mut h = vec![0u64; len];
    for v in values {
        if v >= h.len() {
            h.resize(v + 1, 0);
        }
        h[v] += 1;
    }
    h
}
