use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use rand_distr::{Binomial, Distribution, Exp};
use serde::Serialize;

use crate::error::{Error, Result};

type LaplaceFn = dyn Fn(f64) -> f64 + Send + Sync;
type SampleFn = dyn Fn(&mut dyn RngCore) -> f64 + Send + Sync;

/// User-supplied period: a Laplace transform evaluator and a matching sampler.
#[derive(Clone)]
pub struct CustomPeriod {
    pub name: String,
    laplace: Arc<LaplaceFn>,
    sampler: Arc<SampleFn>,
}

impl CustomPeriod {
    pub fn new(
        name: impl Into<String>,
        laplace: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sampler: impl Fn(&mut dyn RngCore) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            laplace: Arc::new(laplace),
            sampler: Arc::new(sampler),
        }
    }
}

impl fmt::Debug for CustomPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPeriod").field("name", &self.name).finish()
    }
}

/// Distribution of the infectious period `I`.
#[derive(Debug, Clone)]
pub enum InfectiousPeriod {
    /// `I = c` almost surely.
    Constant(f64),
    /// `I ~ Exp(rate)`.
    Exponential(f64),
    /// `I = infinity` with probability `pi`, otherwise `I = 0`.
    ZeroOrInfinity(f64),
    Custom(CustomPeriod),
}

/// Family selector used by the matched constructors and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodKind {
    Constant,
    Exponential,
    ZeroOrInfinity,
}

/// `(p_I, q_I, q_I^(2)) = (1 - phi(lambda), phi(lambda), phi(2 lambda))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionParams {
    pub p_i: f64,
    pub q_i: f64,
    pub q_i2: f64,
}

impl TransmissionParams {
    /// Params of a constant period with transmission probability `p_i`.
    pub fn constant(p_i: f64) -> Self {
        let q = 1.0 - p_i;
        Self {
            p_i,
            q_i: q,
            q_i2: q * q,
        }
    }
}

impl InfectiousPeriod {
    pub fn new(kind: PeriodKind, param: f64) -> Result<Self> {
        let ok = match kind {
            PeriodKind::Constant => param >= 0.0 && param.is_finite(),
            PeriodKind::Exponential => param > 0.0 && param.is_finite(),
            PeriodKind::ZeroOrInfinity => (0.0..=1.0).contains(&param),
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "invalid parameter {param} for {kind:?} infectious period"
            )));
        }
        Ok(match kind {
            PeriodKind::Constant => Self::Constant(param),
            PeriodKind::Exponential => Self::Exponential(param),
            PeriodKind::ZeroOrInfinity => Self::ZeroOrInfinity(param),
        })
    }

    /// A period of the given family together with a contact rate yielding
    /// transmission probability `p_i`: `Constant(1)` with `lambda = -ln(1 - p_i)`,
    /// `Exponential(1)` with `lambda = p_i / (1 - p_i)`, `ZeroOrInfinity(p_i)` with `lambda = 1`.
    pub fn matched(kind: PeriodKind, p_i: f64) -> Result<(Self, f64)> {
        if !(0.0..=1.0).contains(&p_i) {
            return Err(Error::InvalidParameter(format!(
                "transmission probability {p_i} outside [0, 1]"
            )));
        }
        Ok(match kind {
            PeriodKind::Constant => (Self::Constant(1.0), -(1.0 - p_i).ln()),
            PeriodKind::Exponential => (Self::Exponential(1.0), p_i / (1.0 - p_i)),
            PeriodKind::ZeroOrInfinity => (Self::ZeroOrInfinity(p_i), 1.0),
        })
    }

    pub fn kind_name(&self) -> String {
        match self {
            Self::Constant(c) => format!("const:{c}"),
            Self::Exponential(g) => format!("exp:{g}"),
            Self::ZeroOrInfinity(p) => format!("zeroinf:{p}"),
            Self::Custom(c) => format!("custom:{}", c.name),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }

    /// `phi(theta) = E[exp(-theta I)]`, with `exp(-theta * inf) = 0` for `theta > 0`.
    pub fn laplace(&self, theta: f64) -> f64 {
        match self {
            Self::Constant(c) => {
                if theta == 0.0 {
                    1.0
                } else {
                    (-theta * c).exp()
                }
            }
            Self::Exponential(g) => {
                if theta.is_infinite() {
                    0.0
                } else {
                    g / (g + theta)
                }
            }
            Self::ZeroOrInfinity(p) => 1.0 - p,
            Self::Custom(c) => (c.laplace)(theta),
        }
    }

    /// Transmission parameters at contact rate `lambda`. No contacts occur when
    /// `lambda = 0`, so the result is `(0, 1, 1)` regardless of the period.
    pub fn transmission_params(&self, lambda: f64) -> Result<TransmissionParams> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "contact rate must be nonnegative, got {lambda}"
            )));
        }
        if lambda == 0.0 {
            return Ok(TransmissionParams {
                p_i: 0.0,
                q_i: 1.0,
                q_i2: 1.0,
            });
        }
        let q_i = self.laplace(lambda);
        Ok(TransmissionParams {
            p_i: 1.0 - q_i,
            q_i,
            q_i2: self.laplace(2.0 * lambda),
        })
    }

    pub fn sample_duration<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Exponential(g) => Exp::new(*g).expect("positive rate").sample(rng),
            Self::ZeroOrInfinity(p) => {
                if rng.random::<f64>() < *p {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Self::Custom(c) => {
                // `&mut &mut R` is sized, so it coerces to `&mut dyn RngCore`
                let mut rng = rng;
                (c.sampler)(&mut rng)
            }
        }
    }

    /// One draw of `Bin(d, 1 - exp(-lambda I))` with a freshly sampled `I`.
    pub fn sample_transmission_count<R: RngCore + ?Sized>(
        &self,
        lambda: f64,
        d: usize,
        rng: &mut R,
    ) -> usize {
        if d == 0 {
            return 0;
        }
        let duration = self.sample_duration(rng);
        binomial(d, transmission_probability(lambda, duration), rng)
    }

    /// Precomputes a sampler for transmission counts up to degree `max_d`.
    pub fn sampler(&self, lambda: f64, max_d: usize) -> TransmissionSampler {
        TransmissionSampler::new(self, lambda, max_d)
    }
}

/// `1 - exp(-lambda I)`, with no transmission when `lambda = 0`.
pub(crate) fn transmission_probability(lambda: f64, duration: f64) -> f64 {
    if lambda == 0.0 || duration == 0.0 {
        0.0
    } else {
        -(-lambda * duration).exp_m1()
    }
}

fn binomial<R: RngCore + ?Sized>(d: usize, p: f64, rng: &mut R) -> usize {
    if p <= 0.0 || d == 0 {
        0
    } else if p >= 1.0 {
        d
    } else {
        Binomial::new(d as u64, p).expect("valid binomial").sample(rng) as usize
    }
}

const TABLE_MAX_DEGREE: usize = 2048;

#[derive(Debug, Clone)]
enum SamplerKind {
    Never,
    /// Per-degree CDFs of `Bin(d, p)` for a constant period.
    Table { cdfs: Vec<Vec<f64>>, p: f64 },
    /// All-or-nothing: every contact succeeds with probability `pi`.
    AllOrNothing { pi: f64 },
    Mixed(InfectiousPeriod),
}

/// Transmission-count sampler specialized to one (period, lambda) pair.
#[derive(Debug, Clone)]
pub struct TransmissionSampler {
    kind: SamplerKind,
    lambda: f64,
}

impl TransmissionSampler {
    fn new(period: &InfectiousPeriod, lambda: f64, max_d: usize) -> Self {
        let kind = if lambda == 0.0 {
            SamplerKind::Never
        } else {
            match period {
                InfectiousPeriod::Constant(c) => {
                    let p = transmission_probability(lambda, *c);
                    if p == 0.0 {
                        SamplerKind::Never
                    } else {
                        let top = max_d.min(TABLE_MAX_DEGREE);
                        SamplerKind::Table {
                            cdfs: (0..=top).map(|d| binomial_cdf(d, p)).collect(),
                            p,
                        }
                    }
                }
                InfectiousPeriod::ZeroOrInfinity(pi) => SamplerKind::AllOrNothing { pi: *pi },
                other => SamplerKind::Mixed(other.clone()),
            }
        };
        Self { kind, lambda }
    }

    /// Number of successful contacts among `d` neighbours, and whether the
    /// sampled infectious period was infinite.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, d: usize, rng: &mut R) -> (usize, bool) {
        match &self.kind {
            SamplerKind::Never => (0, false),
            SamplerKind::Table { cdfs, p } => {
                if d == 0 {
                    return (0, false);
                }
                match cdfs.get(d) {
                    Some(cdf) => {
                        let u: f64 = rng.random();
                        let k = cdf.iter().position(|&c| u < c).unwrap_or(d);
                        (k, false)
                    }
                    None => (binomial(d, *p, rng), false),
                }
            }
            SamplerKind::AllOrNothing { pi } => {
                if rng.random::<f64>() < *pi {
                    (d, true)
                } else {
                    (0, false)
                }
            }
            SamplerKind::Mixed(period) => {
                let duration = period.sample_duration(rng);
                let p = transmission_probability(self.lambda, duration);
                (binomial(d, p, rng), duration.is_infinite())
            }
        }
    }
}

/// CDF of `Bin(d, p)`; the last entry is forced to one.
fn binomial_cdf(d: usize, p: f64) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(d + 1);
    if p >= 1.0 {
        cdf.resize(d, 0.0);
        cdf.push(1.0);
        return cdf;
    }
    let q = 1.0 - p;
    // log-space start avoids underflow of q^d at large d
    let mut log_pmf = d as f64 * q.ln();
    let ratio = (p / q).ln();
    let mut acc = 0.0;
    for k in 0..=d {
        acc += log_pmf.exp();
        cdf.push(acc.min(1.0));
        if k < d {
            log_pmf += ((d - k) as f64 / (k + 1) as f64).ln() + ratio;
        }
    }
    cdf[d] = 1.0;
    cdf
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_params() {
        let p = InfectiousPeriod::Constant(1.0)
            .transmission_params(-(0.7f64).ln())
            .unwrap();
        assert_abs_diff_eq!(p.p_i, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(p.q_i, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(p.q_i2, 0.49, epsilon = 1e-15);
    }

    #[test]
    fn zero_or_infinity_params() {
        for lambda in [0.1, 1.0, 17.0] {
            let p = InfectiousPeriod::ZeroOrInfinity(0.3)
                .transmission_params(lambda)
                .unwrap();
            assert_abs_diff_eq!(p.p_i, 0.3, epsilon = 1e-15);
            assert_abs_diff_eq!(p.q_i2, 0.7, epsilon = 1e-15);
            assert_abs_diff_eq!(p.q_i2 - p.q_i * p.q_i, 0.3 * 0.7, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(InfectiousPeriod::ZeroOrInfinity(0.3).laplace(0.0), 0.7);
    }

    #[test]
    fn exponential_params() {
        let lambda = 0.5;
        let p = InfectiousPeriod::Exponential(7.0 * lambda)
            .transmission_params(lambda)
            .unwrap();
        assert_abs_diff_eq!(p.p_i, 0.125, epsilon = 1e-15);
        assert!(p.q_i2 > p.q_i * p.q_i);
    }

    #[test]
    fn zero_rate_never_transmits() {
        let p = InfectiousPeriod::ZeroOrInfinity(0.9)
            .transmission_params(0.0)
            .unwrap();
        assert_eq!((p.p_i, p.q_i, p.q_i2), (0.0, 1.0, 1.0));
        assert!(InfectiousPeriod::Constant(1.0).transmission_params(-1.0).is_err());
    }

    #[test]
    fn matched_periods_share_p_i() {
        for kind in [
            PeriodKind::Constant,
            PeriodKind::Exponential,
            PeriodKind::ZeroOrInfinity,
        ] {
            let (period, lambda) = InfectiousPeriod::matched(kind, 0.3).unwrap();
            let p = period.transmission_params(lambda).unwrap();
            assert_abs_diff_eq!(p.p_i, 0.3, epsilon = 1e-14);
        }
        let (period, lambda) = InfectiousPeriod::matched(PeriodKind::Constant, 1.0).unwrap();
        assert_eq!(period.transmission_params(lambda).unwrap().p_i, 1.0);
    }

    #[test]
    fn custom_period_delegates() {
        let c = CustomPeriod::new(
            "two",
            |t| (-2.0 * t).exp(),
            |_rng: &mut dyn RngCore| 2.0,
        );
        let period = InfectiousPeriod::Custom(c);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(period.sample_duration(&mut rng), 2.0);
        assert_abs_diff_eq!(period.laplace(1.0), (-2.0f64).exp());
        assert_eq!(period.sample_transmission_count(1e9, 3, &mut rng), 3);
    }

    #[test]
    fn zero_degree_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let period = InfectiousPeriod::Exponential(1.0);
        for _ in 0..100 {
            assert_eq!(period.sample_transmission_count(2.0, 0, &mut rng), 0);
        }
    }

    #[test]
    fn constant_count_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let period = InfectiousPeriod::Constant(1.0);
        let lambda = -(0.7f64).ln();
        let n = 1_000_000;
        let total: usize = (0..n)
            .map(|_| period.sample_transmission_count(lambda, 4, &mut rng))
            .sum();
        let mean = total as f64 / n as f64;
        let sd = (4.0 * 0.3 * 0.7 / n as f64).sqrt();
        assert!((mean - 1.2).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn all_or_nothing_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let period = InfectiousPeriod::ZeroOrInfinity(0.3);
        let n = 100_000;
        let mut fours = 0;
        for _ in 0..n {
            match period.sample_transmission_count(1.0, 4, &mut rng) {
                0 => {}
                4 => fours += 1,
                k => panic!("unexpected count {k}"),
            }
        }
        let freq = fours as f64 / n as f64;
        assert!((freq - 0.3).abs() < 4.0 * (0.21 / n as f64).sqrt());
    }

    #[test]
    fn binomial_cdf_matches_direct_pmf() {
        let cdf = binomial_cdf(4, 0.3);
        let pmf = [0.2401, 0.4116, 0.2646, 0.0756, 0.0081];
        let mut acc = 0.0;
        for (k, p) in pmf.iter().enumerate() {
            acc += p;
            assert_abs_diff_eq!(cdf[k], acc, epsilon = 1e-12);
        }
        let big = binomial_cdf(1500, 0.3);
        assert!(big[0] >= 0.0 && big[1500] == 1.0);
        assert_abs_diff_eq!(big[1499], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn table_sampler_matches_binomial_mean() {
        let sampler = InfectiousPeriod::Constant(1.0).sampler(-(0.7f64).ln(), 10);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let total: usize = (0..n).map(|_| sampler.sample(9, &mut rng).0).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 2.7).abs() < 4.0 * (9.0 * 0.21 / n as f64).sqrt());
        // degree above the table falls back to direct sampling
        let (k, inf) = sampler.sample(20, &mut rng);
        assert!(k <= 20 && !inf);
    }
}
