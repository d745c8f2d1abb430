use rand::{Rng, RngCore};
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::distributions::{DegreeDistribution, InfectiousPeriod, TransmissionSampler};
use crate::error::{Error, Result};
use crate::graph::{degree_sampler, mr_degree_sequence, DegreeSequence, Model};

use super::state::SimState;

/// How the initially infective individuals are specified.
#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// Fraction `eps` of the population, optionally split by degree (`eps_i`).
    Fraction {
        eps: f64,
        per_degree: Option<Vec<f64>>,
    },
    /// Fixed number `a`, optionally split by degree (`a_i`).
    Count {
        a: usize,
        per_degree: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Epidemic,
    /// Also count infected individuals whose infectious period is infinite.
    SiteCount,
}

/// Everything needed to simulate one replicate.
#[derive(Debug, Clone)]
pub struct EpidemicSetup {
    pub model: Model,
    pub n: usize,
    pub dist: DegreeDistribution,
    pub period: InfectiousPeriod,
    pub lambda: f64,
    pub initial: Initial,
    pub mode: Mode,
    /// Fixed degree sequence overriding the model's construction.
    pub degree_sequence: Option<DegreeSequence>,
    /// Base of the logarithm in the major-outbreak threshold `T >= log n`.
    pub log_base: f64,
}

impl EpidemicSetup {
    /// A single initial infective, epidemic mode, natural-log major threshold.
    pub fn new(
        model: Model,
        n: usize,
        dist: DegreeDistribution,
        period: InfectiousPeriod,
        lambda: f64,
    ) -> Self {
        Self {
            model,
            n,
            dist,
            period,
            lambda,
            initial: Initial::Count {
                a: 1,
                per_degree: None,
            },
            mode: Mode::Epidemic,
            degree_sequence: None,
            log_base: std::f64::consts::E,
        }
    }

    pub fn with_initial(mut self, initial: Initial) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_log_base(mut self, base: f64) -> Self {
        self.log_base = base;
        self
    }

    /// Uses `seq` as the degrees of all `n = seq.n()` individuals.
    pub fn with_degree_sequence(mut self, seq: DegreeSequence) -> Self {
        self.n = seq.n();
        self.degree_sequence = Some(seq);
        self
    }
}

/// Result of one replicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationOutcome {
    /// Number of initially susceptible individuals ever infected.
    pub t: usize,
    /// Infections by degree class; with an odd half-edge total one susceptible
    /// may count one class lower after the leftover half-edge is removed.
    pub t_per_degree: Vec<usize>,
    pub v: usize,
    pub major: bool,
    pub initial_infectives: usize,
}

/// `T >= ln n`.
pub fn classify_major(t: usize, n: usize) -> bool {
    t as f64 >= (n as f64).ln()
}

pub fn classify_major_with_base(t: usize, n: usize, base: f64) -> bool {
    t as f64 >= (n as f64).ln() / base.ln()
}

/// `a_i = round(n eps_i)`, adjusted by largest remainder so that the counts
/// sum to `round(n sum eps_i)`. Ties go to the lower degree.
pub fn fraction_counts(n: usize, eps_per_degree: &[f64]) -> Vec<usize> {
    let scaled: Vec<f64> = eps_per_degree.iter().map(|e| e * n as f64).collect();
    let target = scaled.iter().sum::<f64>().round() as usize;
    let mut counts: Vec<usize> = scaled.iter().map(|s| s.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..scaled.len()).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (scaled[i] - scaled[i].floor(), scaled[j] - scaled[j].floor());
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    for &i in order.iter().take(target.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Where the degrees of the non-initial individuals come from.
#[derive(Debug, Clone)]
enum Susceptibles {
    /// Fixed counts `v_i` minus fixed initial counts.
    Fixed(Vec<usize>),
    /// Fixed sequence; `a` initials chosen uniformly without replacement.
    SampledFromSequence { sequence: Vec<usize>, a: usize },
    /// `n - a` i.i.d. degrees, drawn as a multinomial over classes.
    Iid { count: usize },
}

#[derive(Debug, Clone)]
enum InitialDegrees {
    Fixed(Vec<usize>),
    Iid(usize),
    /// Determined while sampling the susceptibles.
    FromSequence,
}

/// A validated setup with per-replicate work precomputed.
#[derive(Debug, Clone)]
pub struct EpidemicSimulator {
    setup: EpidemicSetup,
    sampler: TransmissionSampler,
    alias: WeightedAliasIndex<f64>,
    /// `p_i / sum_{j>=i} p_j`, for sequential-binomial multinomials.
    conditional: Vec<f64>,
    susceptibles: Susceptibles,
    initials: InitialDegrees,
    max_degree: usize,
}

impl EpidemicSimulator {
    pub fn new(setup: EpidemicSetup) -> Result<Self> {
        validate(&setup)?;
        let n = setup.n;
        let pmf = setup.dist.pmf();
        let max_degree = setup
            .degree_sequence
            .as_ref()
            .map_or(setup.dist.max_degree(), |s| s.max_degree());

        let fixed = match (&setup.degree_sequence, setup.model) {
            (Some(seq), _) => Some(seq.clone()),
            (None, Model::MolloyReed) => Some(mr_degree_sequence(&setup.dist, n)),
            (None, Model::NewmanStrogatzWatts) => None,
        };

        let per_degree_counts: Option<Vec<usize>> = match &setup.initial {
            Initial::Fraction {
                per_degree: Some(eps_i),
                ..
            } => Some(fraction_counts(n, eps_i)),
            Initial::Fraction { eps, per_degree: None } if fixed.is_some() => {
                let eps_i: Vec<f64> = pmf.iter().map(|p| eps * p).collect();
                Some(fraction_counts(n, &eps_i))
            }
            Initial::Count {
                per_degree: Some(a_i),
                ..
            } => Some(a_i.clone()),
            _ => None,
        };
        let a_total = match (&per_degree_counts, &setup.initial) {
            (Some(a_i), _) => a_i.iter().sum(),
            (None, Initial::Fraction { eps, .. }) => (eps * n as f64).round() as usize,
            (None, Initial::Count { a, .. }) => *a,
        };
        if a_total > n {
            return Err(Error::InvalidInitialCondition(format!(
                "{a_total} initial infectives exceed population {n}"
            )));
        }

        let (susceptibles, initials) = match (fixed, per_degree_counts) {
            (Some(seq), Some(a_i)) => {
                let mut v = seq.counts();
                v.resize(v.len().max(a_i.len()), 0);
                for (i, &a) in a_i.iter().enumerate() {
                    if a > v[i] {
                        return Err(Error::InvalidInitialCondition(format!(
                            "a_{i} = {a} exceeds the {} individuals of degree {i}",
                            v[i]
                        )));
                    }
                    v[i] -= a;
                }
                (Susceptibles::Fixed(v), InitialDegrees::Fixed(a_i))
            }
            (Some(seq), None) => (
                Susceptibles::SampledFromSequence {
                    sequence: seq.degrees().to_vec(),
                    a: a_total,
                },
                InitialDegrees::FromSequence,
            ),
            (None, Some(a_i)) => (
                Susceptibles::Iid {
                    count: n - a_total,
                },
                InitialDegrees::Fixed(a_i),
            ),
            (None, None) => (
                Susceptibles::Iid {
                    count: n - a_total,
                },
                InitialDegrees::Iid(a_total),
            ),
        };

        let mut tail = 0.0;
        let mut conditional = vec![0.0; pmf.len()];
        for i in (0..pmf.len()).rev() {
            tail += pmf[i];
            conditional[i] = if tail > 0.0 { (pmf[i] / tail).min(1.0) } else { 0.0 };
        }

        let initial_max = match &initials {
            InitialDegrees::Fixed(a_i) => a_i.len().saturating_sub(1),
            _ => 0,
        };
        let max_degree = max_degree.max(initial_max);
        Ok(Self {
            sampler: setup.period.sampler(setup.lambda, max_degree),
            alias: degree_sampler(&setup.dist)?,
            conditional,
            susceptibles,
            initials,
            max_degree,
            setup,
        })
    }

    pub fn setup(&self) -> &EpidemicSetup {
        &self.setup
    }

    /// Draws the initial state: susceptible counts by degree and the
    /// half-edges of the initial infectives.
    pub fn initialize<R: RngCore + ?Sized>(&self, rng: &mut R) -> (SimState, usize) {
        let mut x = vec![0usize; self.max_degree + 1];
        let mut y_e = 0u64;
        let mut z_e = 0u64;
        let mut initial_count = 0;
        let mut seed_initial = |d: usize, rng: &mut R| {
            let (k, _) = self.sampler.sample(d, rng);
            y_e += k as u64;
            z_e += (d - k) as u64;
            initial_count += 1;
        };

        match &self.susceptibles {
            Susceptibles::Fixed(v) => x[..v.len()].copy_from_slice(v),
            Susceptibles::SampledFromSequence { sequence, a } => {
                for &d in sequence {
                    x[d] += 1;
                }
                for idx in rand::seq::index::sample(rng, sequence.len(), *a).into_iter() {
                    let d = sequence[idx];
                    x[d] -= 1;
                    seed_initial(d, rng);
                }
            }
            Susceptibles::Iid { count } => {
                let mut remaining = *count as u64;
                for (i, &c) in self.conditional.iter().enumerate() {
                    if remaining == 0 {
                        break;
                    }
                    let k = if c >= 1.0 {
                        remaining
                    } else if c <= 0.0 {
                        0
                    } else {
                        Binomial::new(remaining, c).expect("valid binomial").sample(rng)
                    };
                    x[i] = k as usize;
                    remaining -= k;
                }
            }
        }

        match &self.initials {
            InitialDegrees::Fixed(a_i) => {
                for (d, &a) in a_i.iter().enumerate() {
                    for _ in 0..a {
                        seed_initial(d, rng);
                    }
                }
            }
            InitialDegrees::Iid(a) => {
                for _ in 0..*a {
                    let d = self.alias.sample(rng);
                    seed_initial(d, rng);
                }
            }
            InitialDegrees::FromSequence => {}
        }
        drop_leftover_stub(&mut x, &mut y_e, &mut z_e, rng);
        (SimState::new(x, y_e, z_e, self.setup.mode), initial_count)
    }

    /// Runs one replicate to completion.
    pub fn run<R: RngCore + ?Sized>(&self, rng: &mut R) -> SimulationOutcome {
        let (mut state, initial_infectives) = self.initialize(rng);
        let x0 = state.x.clone();
        while !state.is_terminal() {
            state
                .step(&self.sampler, rng)
                .expect("nonterminal state has an infective half-edge");
        }
        let t_per_degree: Vec<usize> = x0.iter().zip(&state.x).map(|(a, b)| a - b).collect();
        let t = t_per_degree.iter().sum();
        SimulationOutcome {
            t,
            t_per_degree,
            v: state.v,
            major: classify_major_with_base(t, self.setup.n, self.setup.log_base),
            initial_infectives,
        }
    }
}

/// With an odd half-edge total, removes one uniformly chosen half-edge, as the
/// graph construction does. A susceptible losing a half-edge moves down one
/// degree class.
fn drop_leftover_stub<R: RngCore + ?Sized>(
    x: &mut [usize],
    y_e: &mut u64,
    z_e: &mut u64,
    rng: &mut R,
) {
    let x_e: u64 = x.iter().enumerate().map(|(i, &c)| (i * c) as u64).sum();
    let total = x_e + *y_e + *z_e;
    if total % 2 == 0 {
        return;
    }
    let mut r = rng.random_range(0..total);
    if r < *y_e {
        *y_e -= 1;
        return;
    }
    r -= *y_e;
    if r < *z_e {
        *z_e -= 1;
        return;
    }
    r -= *z_e;
    for i in 1..x.len() {
        let w = (i * x[i]) as u64;
        if r < w {
            x[i] -= 1;
            x[i - 1] += 1;
            return;
        }
        r -= w;
    }
}

fn validate(setup: &EpidemicSetup) -> Result<()> {
    if setup.n == 0 {
        return Err(Error::InvalidParameter("population size must be positive".into()));
    }
    if setup.degree_sequence.is_none() && setup.dist.mean() <= 0.0 {
        return Err(Error::InvalidDistribution(
            "mean degree is zero; no epidemic is possible".into(),
        ));
    }
    if !(setup.lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "contact rate must be nonnegative, got {}",
            setup.lambda
        )));
    }
    if !(setup.log_base > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "logarithm base must exceed 1, got {}",
            setup.log_base
        )));
    }
    match &setup.initial {
        Initial::Fraction { eps, per_degree } => {
            if !(0.0..=1.0).contains(eps) {
                return Err(Error::InvalidInitialCondition(format!("eps = {eps} outside [0, 1]")));
            }
            if let Some(eps_i) = per_degree {
                let pmf = setup.dist.pmf();
                for (i, &e) in eps_i.iter().enumerate() {
                    let p = pmf.get(i).copied().unwrap_or(0.0);
                    if !(e >= 0.0) || e > p + 1e-12 {
                        return Err(Error::InvalidInitialCondition(format!(
                            "eps_{i} = {e} outside [0, p_{i} = {p}]"
                        )));
                    }
                }
            }
        }
        Initial::Count { a, per_degree } => {
            if let Some(a_i) = per_degree {
                let sum: usize = a_i.iter().sum();
                if sum != *a {
                    return Err(Error::InvalidInitialCondition(format!(
                        "per-degree counts sum to {sum}, expected a = {a}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Draws the initial state for `setup`.
pub fn initialize<R: RngCore + ?Sized>(setup: &EpidemicSetup, rng: &mut R) -> Result<SimState> {
    Ok(EpidemicSimulator::new(setup.clone())?.initialize(rng).0)
}

/// Simulates one final size.
pub fn run_final_size<R: RngCore + ?Sized>(
    setup: &EpidemicSetup,
    rng: &mut R,
) -> Result<SimulationOutcome> {
    Ok(EpidemicSimulator::new(setup.clone())?.run(rng))
}
