use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Execution};
use crate::rng::replicate_rng;
use crate::stats::{histogram, mean_var};

use super::{EpidemicSetup, EpidemicSimulator};

/// Final size of one replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub rep: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "V")]
    pub v: usize,
    pub major: bool,
}

/// Ensemble moments of the final size. Conditional moments are `None` when no
/// replicate was a major outbreak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Mean of `T / n`.
    pub rho_hat: f64,
    /// `n Var(T / n)`.
    pub sigma2_hat: f64,
    pub major_frac: f64,
    pub rho_hat_major: Option<f64>,
    pub sigma2_hat_major: Option<f64>,
}

impl EnsembleSummary {
    /// Summarizes final sizes, in replicate order.
    pub fn from_sizes(n: usize, seed: u64, sizes: &[usize], major: &[bool]) -> Self {
        let scaled: Vec<f64> = sizes.iter().map(|&t| t as f64 / n as f64).collect();
        let (rho_hat, var) = mean_var(&scaled);
        let majors: Vec<f64> = scaled
            .iter()
            .zip(major)
            .filter(|(_, m)| **m)
            .map(|(x, _)| *x)
            .collect();
        let (rho_hat_major, sigma2_hat_major) = if majors.is_empty() {
            (None, None)
        } else {
            let (m, v) = mean_var(&majors);
            (Some(m), Some(n as f64 * v))
        };
        Self {
            n,
            reps: sizes.len(),
            seed,
            rho_hat,
            sigma2_hat: n as f64 * var,
            major_frac: majors.len() as f64 / sizes.len() as f64,
            rho_hat_major,
            sigma2_hat_major,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub summary: EnsembleSummary,
    pub records: Vec<ReplicateRecord>,
}

impl EnsembleResult {
    /// Counts of each final size `0..=n`.
    pub fn histogram(&self) -> Vec<u64> {
        histogram(self.records.iter().map(|r| r.t), self.summary.n + 1)
    }

    /// Raw replicate table with header `rep,T,V,major`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "rep,T,V,major")?;
        for r in &self.records {
            writeln!(out, "{},{},{},{}", r.rep, r.t, r.v, u8::from(r.major))?;
        }
        Ok(())
    }
}

/// Runs `reps` replicates; replicate `r` draws from the stream `(seed, r)`, so
/// results do not depend on how replicates are scheduled.
pub fn run_ensemble(
    setup: &EpidemicSetup,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<EnsembleResult> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    let sim = EpidemicSimulator::new(setup.clone())?;
    let records = map_indexed(reps, exec, |rep| {
        let mut rng = replicate_rng(seed, rep as u64);
        let out = sim.run(&mut rng);
        ReplicateRecord {
            rep,
            t: out.t,
            v: out.v,
            major: out.major,
        }
    });
    let sizes: Vec<usize> = records.iter().map(|r| r.t).collect();
    let major: Vec<bool> = records.iter().map(|r| r.major).collect();
    Ok(EnsembleResult {
        summary: EnsembleSummary::from_sizes(setup.n, seed, &sizes, &major),
        records,
    })
}
