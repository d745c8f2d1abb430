//! Explicit configuration-model graphs: degree sequences, uniform half-edge
//! pairing, bond/site percolation and connected components.

mod components;
mod multigraph;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::distributions::DegreeDistribution;
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Execution};
use crate::rng::replicate_rng;

pub use components::{component_size_of, components, largest_component, Components, UnionFind};
pub use multigraph::{bond_percolate, pair_half_edges, site_percolate, write_edge_list, MultiGraph};

/// Configuration-model variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Deterministic degree counts from the quantile rule.
    #[serde(rename = "MR")]
    MolloyReed,
    /// I.i.d. degrees.
    #[serde(rename = "NSW")]
    NewmanStrogatzWatts,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MolloyReed => "MR",
            Self::NewmanStrogatzWatts => "NSW",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mr" | "molloy-reed" => Ok(Self::MolloyReed),
            "nsw" | "newman-strogatz-watts" => Ok(Self::NewmanStrogatzWatts),
            other => Err(Error::Parse(format!("unknown model `{other}` (expected mr or nsw)"))),
        }
    }
}

/// Per-node degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
    total: usize,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        let total = degrees.iter().sum();
        Self { degrees, total }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_half_edges(&self) -> usize {
        self.total
    }

    pub fn is_odd(&self) -> bool {
        self.total % 2 == 1
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `v_i`, the number of nodes of each degree `0..=max_degree`.
    pub fn counts(&self) -> Vec<usize> {
        let mut v = vec![0; self.max_degree() + 1];
        for &d in &self.degrees {
            v[d] += 1;
        }
        v
    }
}

/// `D_i = inf { d : F_D(d) > i / (n + 1) }` for `i = 1..=n`.
pub fn mr_degree_sequence(dist: &DegreeDistribution, n: usize) -> DegreeSequence {
    let pmf = dist.pmf();
    let mut degrees = Vec::with_capacity(n);
    let mut d = 0;
    let mut cdf = pmf[0];
    for i in 1..=n {
        let level = i as f64 / (n + 1) as f64;
        while cdf <= level && d + 1 < pmf.len() {
            d += 1;
            cdf += pmf[d];
        }
        degrees.push(d);
    }
    DegreeSequence::new(degrees)
}

/// `v_i` for the quantile sequence, without materializing it.
pub fn mr_degree_counts(dist: &DegreeDistribution, n: usize) -> Vec<usize> {
    let mut v = mr_degree_sequence(dist, n).counts();
    v.resize(dist.max_degree() + 1, 0);
    v
}

/// Degree sampler over the support of `dist`.
pub(crate) fn degree_sampler(dist: &DegreeDistribution) -> Result<WeightedAliasIndex<f64>> {
    WeightedAliasIndex::new(dist.pmf().to_vec())
        .map_err(|e| Error::InvalidDistribution(format!("cannot sample degrees: {e}")))
}

/// `n` i.i.d. draws from `dist`.
pub fn nsw_degree_sequence<R: RngCore + ?Sized>(
    dist: &DegreeDistribution,
    n: usize,
    rng: &mut R,
) -> DegreeSequence {
    let sampler = degree_sampler(dist).expect("normalized pmf");
    DegreeSequence::new((0..n).map(|_| sampler.sample(rng)).collect())
}

pub fn degree_sequence<R: RngCore + ?Sized>(
    model: Model,
    dist: &DegreeDistribution,
    n: usize,
    rng: &mut R,
) -> DegreeSequence {
    match model {
        Model::MolloyReed => mr_degree_sequence(dist, n),
        Model::NewmanStrogatzWatts => nsw_degree_sequence(dist, n, rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PercolationKind {
    Bond,
    Site,
}

impl FromStr for PercolationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bond" => Ok(Self::Bond),
            "site" => Ok(Self::Site),
            other => Err(Error::Parse(format!("unknown percolation kind `{other}`"))),
        }
    }
}

/// Largest-component sizes over `reps` independently generated and percolated graphs.
#[allow(clippy::too_many_arguments)]
pub fn percolation_ensemble(
    kind: PercolationKind,
    model: Model,
    dist: &DegreeDistribution,
    n: usize,
    pi: f64,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&pi) {
        return Err(Error::InvalidParameter(format!("pi = {pi} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let sampler = degree_sampler(dist)?;
    let mr = (model == Model::MolloyReed).then(|| mr_degree_sequence(dist, n));
    Ok(map_indexed(reps, exec, |rep| {
        let mut rng = replicate_rng(seed, rep as u64);
        let seq = match &mr {
            Some(seq) => seq.clone(),
            None => DegreeSequence::new((0..n).map(|_| sampler.sample(&mut rng)).collect()),
        };
        let g = pair_half_edges(&seq, &mut rng);
        let g = match kind {
            PercolationKind::Bond => bond_percolate(&g, pi, &mut rng),
            PercolationKind::Site => site_percolate(&g, pi, &mut rng),
        };
        largest_component(&g).0
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mr_constant() {
        let seq = mr_degree_sequence(&DegreeDistribution::constant(5), 4);
        assert_eq!(seq.degrees(), &[5, 5, 5, 5]);
    }

    #[test]
    fn mr_single_node_is_median() {
        let dist = DegreeDistribution::from_pmf(vec![0.2, 0.25, 0.3, 0.25]).unwrap();
        // F = 0.2, 0.45, 0.75, 1.0 ; first F > 1/2 is d = 2
        assert_eq!(mr_degree_sequence(&dist, 1).degrees(), &[2]);
    }

    #[test]
    fn mr_quantiles_track_pmf() {
        let dist = DegreeDistribution::geometric(1.0 / 6.0, 1e-12).unwrap();
        let n = 100_000;
        let seq = mr_degree_sequence(&dist, n);
        assert!(seq.degrees().windows(2).all(|w| w[0] <= w[1]));
        let counts = seq.counts();
        let max_dev = dist
            .pmf()
            .iter()
            .enumerate()
            .map(|(i, p)| (counts.get(i).copied().unwrap_or(0) as f64 / n as f64 - p).abs())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-3, "{max_dev}");
    }

    #[test]
    fn nsw_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 100_000;
        let dist = DegreeDistribution::poisson(5.0, 1e-12).unwrap();
        let seq = nsw_degree_sequence(&dist, n, &mut rng);
        let mean = seq.total_half_edges() as f64 / n as f64;
        assert!((mean - 5.0).abs() < 4.0 * (5.0 / n as f64).sqrt());

        let dist = DegreeDistribution::geometric(1.0 / 6.0, 1e-12).unwrap();
        let seq = nsw_degree_sequence(&dist, n, &mut rng);
        let xs: Vec<f64> = seq.degrees().iter().map(|&d| d as f64).collect();
        let (_, var) = crate::stats::mean_var(&xs);
        assert!((var / 30.0 - 1.0).abs() < 0.1, "{var}");

        let seq = nsw_degree_sequence(&DegreeDistribution::constant(5), 10, &mut rng);
        assert_eq!(seq.degrees(), &[5; 10]);
    }

    #[test]
    fn model_parse_and_display() {
        assert_eq!("NSW".parse::<Model>().unwrap(), Model::NewmanStrogatzWatts);
        assert_eq!(Model::MolloyReed.to_string(), "MR");
        assert!("er".parse::<Model>().is_err());
    }

    #[test]
    fn ensemble_is_reproducible() {
        let dist = DegreeDistribution::poisson(3.0, 1e-12).unwrap();
        let run = |exec| {
            percolation_ensemble(
                PercolationKind::Site,
                Model::NewmanStrogatzWatts,
                &dist,
                200,
                0.7,
                20,
                4,
                exec,
            )
            .unwrap()
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Threads(2)));
    }
}
