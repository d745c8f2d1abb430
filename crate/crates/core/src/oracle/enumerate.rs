use crate::error::{Error, Result};
use crate::graph::UnionFind;

/// Largest total degree accepted by [`enumerate_final_size`].
pub const MAX_ENUMERATION_HALF_EDGES: usize = 10;

/// Transmission structure used by the exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnumerationPeriod {
    /// Each edge transmits independently with probability `p`.
    Constant(f64),
    /// Each vertex, once infected, transmits along all its edges with probability `pi`
    /// and along none otherwise.
    ZeroOrInfinity(f64),
}

/// Exact distribution of the final size `T` (initial infective excluded)
/// over all half-edge pairings of `degrees`, with `initial` infected.
///
/// An odd half-edge total first drops one uniformly chosen half-edge.
pub fn enumerate_final_size(
    degrees: &[usize],
    period: EnumerationPeriod,
    initial: usize,
) -> Result<Vec<f64>> {
    let n = degrees.len();
    if initial >= n {
        return Err(Error::InvalidInitialCondition(format!(
            "initial vertex {initial} outside 0..{n}"
        )));
    }
    let total: usize = degrees.iter().sum();
    if total > MAX_ENUMERATION_HALF_EDGES {
        return Err(Error::InstanceTooLarge {
            half_edges: total,
            max: MAX_ENUMERATION_HALF_EDGES,
        });
    }
    let prob = match period {
        EnumerationPeriod::Constant(p) | EnumerationPeriod::ZeroOrInfinity(p) => p,
    };
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::InvalidParameter(format!(
            "transmission probability {prob} outside [0, 1]"
        )));
    }
    let stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let mut pmf = vec![0.0; n];
    let mut add_pairings = |stubs: &[usize], weight: f64| {
        let pairings = all_pairings(stubs);
        let each = weight / pairings.len() as f64;
        for edges in &pairings {
            final_size_given_graph(n, edges, period, initial, each, &mut pmf);
        }
    };
    if total % 2 == 1 {
        for skip in 0..total {
            let rest: Vec<usize> = stubs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            add_pairings(&rest, 1.0 / total as f64);
        }
    } else {
        add_pairings(&stubs, 1.0);
    }
    Ok(pmf)
}

/// Every perfect matching of the stub list, each as a list of vertex pairs.
fn all_pairings(stubs: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn recurse(
        free: &mut Vec<usize>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some(&first) = free.first() else {
            out.push(current.clone());
            return;
        };
        for j in 1..free.len() {
            let partner = free[j];
            let mut rest: Vec<usize> = free[1..].to_vec();
            rest.remove(j - 1);
            current.push((first, partner));
            recurse(&mut rest, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    recurse(&mut stubs.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn final_size_given_graph(
    n: usize,
    edges: &[(usize, usize)],
    period: EnumerationPeriod,
    initial: usize,
    weight: f64,
    pmf: &mut [f64],
) {
    match period {
        EnumerationPeriod::Constant(p) => {
            // only the direction from the earlier-infected end matters, so each
            // edge is an independent coin
            let m = edges.len();
            for mask in 0u32..(1 << m) {
                let open = mask.count_ones() as i32;
                let w = weight * p.powi(open) * (1.0 - p).powi(m as i32 - open);
                if w == 0.0 {
                    continue;
                }
                let mut uf = UnionFind::new(n);
                for (k, &(a, b)) in edges.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        uf.union(a, b);
                    }
                }
                let root = uf.find(initial);
                let reached = (0..n).filter(|&v| uf.find(v) == root).count();
                pmf[reached - 1] += w;
            }
        }
        EnumerationPeriod::ZeroOrInfinity(pi) => {
            for mask in 0u32..(1 << n) {
                let spreaders = mask.count_ones() as i32;
                let w = weight * pi.powi(spreaders) * (1.0 - pi).powi(n as i32 - spreaders);
                if w == 0.0 {
                    continue;
                }
                let mut infected = vec![false; n];
                infected[initial] = true;
                let mut stack = vec![initial];
                while let Some(v) = stack.pop() {
                    if mask >> v & 1 == 0 {
                        continue;
                    }
                    for &(a, b) in edges {
                        for (from, to) in [(a, b), (b, a)] {
                            if from == v && !infected[to] {
                                infected[to] = true;
                                stack.push(to);
                            }
                        }
                    }
                }
                let reached = infected.iter().filter(|&&x| x).count();
                pmf[reached - 1] += w;
            }
        }
    }
}
