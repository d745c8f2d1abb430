use rand::{Rng, RngCore};
use serde::Serialize;

use crate::distributions::TransmissionSampler;
use crate::error::{Error, Result};

use super::Mode;

/// Binary indexed tree over nonnegative integer weights.
#[derive(Debug, Clone)]
pub struct Fenwick {
    tree: Vec<u64>,
    top: usize,
}

impl Fenwick {
    pub fn new(weights: &[u64]) -> Self {
        let n = weights.len();
        let mut tree = vec![0u64; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += w;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i + 1];
            }
        }
        let top = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        Self { tree, top }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sub(&mut self, index: usize, amount: u64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] -= amount;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    pub fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

/// Outcome of one pairing event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Event {
    /// A susceptible of this degree was infected and passed the infection
    /// along `transmitted` of its remaining half-edges.
    Infection { degree: usize, transmitted: usize },
    InfectiveInfective,
    InfectiveRecovered,
}

/// Half-edge counts of the jump chain.
#[derive(Debug, Clone)]
pub struct SimState {
    /// Susceptibles by degree.
    pub x: Vec<usize>,
    pub x_e: u64,
    pub y_e: u64,
    pub z_e: u64,
    /// Infected susceptibles whose infectious period was infinite.
    pub v: usize,
    pub mode: Mode,
    classes: Fenwick,
}

impl SimState {
    pub fn new(x: Vec<usize>, y_e: u64, z_e: u64, mode: Mode) -> Self {
        let weights: Vec<u64> = x.iter().enumerate().map(|(i, &c)| (i * c) as u64).collect();
        let x_e = weights.iter().sum();
        Self {
            classes: Fenwick::new(&weights),
            x,
            x_e,
            y_e,
            z_e,
            v: 0,
            mode,
        }
    }

    /// Unpaired half-edges other than the one being paired.
    #[inline]
    pub fn partners(&self) -> u64 {
        self.x_e + self.z_e + self.y_e.saturating_sub(1)
    }

    pub fn total_half_edges(&self) -> u64 {
        self.x_e + self.y_e + self.z_e
    }

    /// No infective half-edge, or a single one with nothing left to pair with.
    #[inline]
    pub fn is_terminal(&self) -> bool {
        self.y_e == 0 || self.partners() == 0
    }

    /// Pairs one infective half-edge with a uniformly chosen other half-edge.
    pub fn step<R: RngCore + ?Sized>(
        &mut self,
        sampler: &TransmissionSampler,
        rng: &mut R,
    ) -> Result<Event> {
        if self.y_e == 0 {
            return Err(Error::NoInfectiveHalfEdge);
        }
        let m = self.partners();
        if m == 0 {
            return Err(Error::NoInfectiveHalfEdge);
        }
        let u = rng.random_range(0..m);
        if u < self.x_e {
            let degree = self.classes.find(u);
            debug_assert!(degree > 0 && self.x[degree] > 0);
            self.x[degree] -= 1;
            self.x_e -= degree as u64;
            self.classes.sub(degree, degree as u64);
            let (k, infinite) = sampler.sample(degree - 1, rng);
            self.y_e = self.y_e + k as u64 - 1;
            self.z_e += (degree - 1 - k) as u64;
            if self.mode == Mode::SiteCount && infinite {
                self.v += 1;
            }
            Ok(Event::Infection {
                degree,
                transmitted: k,
            })
        } else if u < self.x_e + self.y_e - 1 {
            self.y_e -= 2;
            Ok(Event::InfectiveInfective)
        } else {
            self.y_e -= 1;
            self.z_e -= 1;
            Ok(Event::InfectiveRecovered)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::InfectiousPeriod;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fenwick_find_matches_linear_scan() {
        let w = [0u64, 3, 0, 5, 1, 0, 0, 7, 2];
        let f = Fenwick::new(&w);
        let total: u64 = w.iter().sum();
        for t in 0..total {
            let mut acc = 0;
            let expect = w
                .iter()
                .position(|&x| {
                    acc += x;
                    acc > t
                })
                .unwrap();
            assert_eq!(f.find(t), expect, "target {t}");
        }
    }

    #[test]
    fn fenwick_after_updates() {
        let mut f = Fenwick::new(&[4, 4, 4]);
        f.sub(1, 4);
        assert_eq!(f.find(3), 0);
        assert_eq!(f.find(4), 2);
    }

    #[test]
    fn only_infective_pairs() {
        let sampler = InfectiousPeriod::Constant(1.0).sampler(1.0, 5);
        let mut s = SimState::new(vec![], 2, 0, Mode::Epidemic);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(s.step(&sampler, &mut rng).unwrap(), Event::InfectiveInfective);
        assert_eq!(s.y_e, 0);
        assert_eq!(s.step(&sampler, &mut rng), Err(Error::NoInfectiveHalfEdge));
    }

    #[test]
    fn degree_one_susceptible() {
        let sampler = InfectiousPeriod::ZeroOrInfinity(1.0).sampler(1.0, 5);
        let mut s = SimState::new(vec![0, 1], 1, 0, Mode::SiteCount);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = s.step(&sampler, &mut rng).unwrap();
        assert_eq!(
            e,
            Event::Infection {
                degree: 1,
                transmitted: 0
            }
        );
        assert_eq!((s.y_e, s.x_e, s.z_e, s.v), (0, 0, 0, 1));
        assert!(s.is_terminal());
    }

    #[test]
    fn event_frequencies_match_pairing_probabilities() {
        let sampler = InfectiousPeriod::Constant(1.0).sampler(1.0, 5);
        let base = SimState::new(vec![0, 2, 0, 3], 4, 5, Mode::Epidemic);
        // M = 11 + 3 + 5 = 19: degree 1 -> 2/19, degree 3 -> 9/19, II 3/19, IR 5/19
        let probs = [2.0 / 19.0, 9.0 / 19.0, 3.0 / 19.0, 5.0 / 19.0];
        let mut counts = [0u64; 4];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let draws = 1_000_000;
        for _ in 0..draws {
            let mut s = base.clone();
            let idx = match s.step(&sampler, &mut rng).unwrap() {
                Event::Infection { degree: 1, .. } => 0,
                Event::Infection { .. } => 1,
                Event::InfectiveInfective => 2,
                Event::InfectiveRecovered => 3,
            };
            counts[idx] += 1;
        }
        for (c, p) in counts.iter().zip(probs) {
            let sd = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - draws as f64 * p).abs() < 3.0 * sd, "{counts:?}");
        }
    }
}
