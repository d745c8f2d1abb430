use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::Serialize;

use super::DegreeSequence;

/// Undirected multigraph; self-loops and parallel edges are kept. Removed
/// vertices (site percolation) stay in the vertex set but are marked dead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    alive: Vec<bool>,
    dropped_stub: bool,
}

impl MultiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(edges.iter().all(|&(u, v)| u < n && v < n), "edge endpoint out of range");
        Self {
            n,
            edges,
            alive: vec![true; n],
            dropped_stub: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|a| **a).count()
    }

    /// Whether pairing discarded a leftover stub.
    pub fn dropped_stub(&self) -> bool {
        self.dropped_stub
    }

    /// Degree of each vertex, counting a self-loop twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }
}

/// Uniform perfect matching of half-edges: shuffle and pair consecutive stubs.
/// With an odd total, one uniformly chosen stub is discarded first.
pub fn pair_half_edges<R: RngCore + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> MultiGraph {
    let mut stubs: Vec<usize> = Vec::with_capacity(seq.total_half_edges());
    for (node, &d) in seq.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node, d));
    }
    let dropped_stub = stubs.len() % 2 == 1;
    if dropped_stub {
        let idx = rng.random_range(0..stubs.len());
        stubs.swap_remove(idx);
    }
    stubs.shuffle(rng);
    let edges = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    MultiGraph {
        n: seq.n(),
        edges,
        alive: vec![true; seq.n()],
        dropped_stub,
    }
}

/// Keeps each edge independently with probability `pi`.
pub fn bond_percolate<R: RngCore + ?Sized>(g: &MultiGraph, pi: f64, rng: &mut R) -> MultiGraph {
    let edges = g
        .edges
        .iter()
        .copied()
        .filter(|_| pi >= 1.0 || rng.random::<f64>() < pi)
        .collect();
    MultiGraph {
        edges,
        ..g.clone()
    }
}

/// Keeps each vertex independently with probability `pi`; edges touching a
/// removed vertex go with it.
pub fn site_percolate<R: RngCore + ?Sized>(g: &MultiGraph, pi: f64, rng: &mut R) -> MultiGraph {
    let alive: Vec<bool> = g
        .alive
        .iter()
        .map(|&a| a && (pi >= 1.0 || rng.random::<f64>() < pi))
        .collect();
    let edges = g
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| alive[u] && alive[v])
        .collect();
    MultiGraph {
        n: g.n,
        edges,
        alive,
        dropped_stub: g.dropped_stub,
    }
}

/// Writes one `u v` line per edge, 0-indexed.
pub fn write_edge_list<W: Write>(g: &MultiGraph, mut out: W) -> io::Result<()> {
    for &(u, v) in &g.edges {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn trivial_pairings() {
        let g = pair_half_edges(&DegreeSequence::new(vec![1, 1]), &mut rng());
        let e = g.edges()[0];
        assert_eq!((e.0.min(e.1), e.0.max(e.1)), (0, 1));
        let g = pair_half_edges(&DegreeSequence::new(vec![2]), &mut rng());
        assert_eq!(g.edges(), &[(0, 0)]);
    }

    #[test]
    fn odd_total_drops_one_stub() {
        let seq = DegreeSequence::new(vec![3, 2, 2]);
        let g = pair_half_edges(&seq, &mut rng());
        assert!(g.dropped_stub());
        assert_eq!(2 * g.edges().len(), 6);
        let d = g.degrees();
        let diff: usize = seq.degrees().iter().zip(&d).map(|(a, b)| a - b).sum();
        assert_eq!(diff, 1);
    }

    #[test]
    fn percolation_extremes() {
        let mut r = rng();
        let seq = DegreeSequence::new(vec![3; 100]);
        let g = pair_half_edges(&seq, &mut r);
        assert_eq!(bond_percolate(&g, 1.0, &mut r), g);
        assert!(bond_percolate(&g, 0.0, &mut r).edges().is_empty());
        assert_eq!(site_percolate(&g, 1.0, &mut r), g);
        let dead = site_percolate(&g, 0.0, &mut r);
        assert_eq!(dead.alive_count(), 0);
        assert!(dead.edges().is_empty());
    }

    #[test]
    fn bond_keeps_binomial_count() {
        let mut r = rng();
        let g = pair_half_edges(&DegreeSequence::new(vec![2; 10_000]), &mut r);
        let kept = bond_percolate(&g, 0.5, &mut r).edges().len() as f64;
        assert!((kept - 5000.0).abs() < 150.0, "{kept}");
    }

    #[test]
    fn site_survivors_binomial() {
        let mut r = rng();
        let g = MultiGraph::new(10_000, vec![]);
        let alive = site_percolate(&g, 0.3, &mut r).alive_count() as f64;
        assert!((alive - 3000.0).abs() < 3.0 * (10_000.0f64 * 0.21).sqrt());
    }

    #[test]
    fn edge_list_format() {
        let g = MultiGraph::new(3, vec![(0, 1), (2, 2)]);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1\n2 2\n");
    }
}
