use super::MultiGraph;

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Connected components over the surviving vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component id per vertex, `None` for removed vertices. Ids are assigned
    /// in order of first appearance by vertex index.
    pub label: Vec<Option<usize>>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

fn union_graph(g: &MultiGraph) -> UnionFind {
    let mut uf = UnionFind::new(g.n());
    for &(u, v) in g.edges() {
        if u != v {
            uf.union(u, v);
        }
    }
    uf
}

pub fn components(g: &MultiGraph) -> Components {
    let mut uf = union_graph(g);
    let mut root_id = vec![usize::MAX; g.n()];
    let mut label = vec![None; g.n()];
    let mut sizes = Vec::new();
    for v in 0..g.n() {
        if !g.is_alive(v) {
            continue;
        }
        let r = uf.find(v);
        if root_id[r] == usize::MAX {
            root_id[r] = sizes.len();
            sizes.push(0);
        }
        sizes[root_id[r]] += 1;
        label[v] = Some(root_id[r]);
    }
    Components { label, sizes }
}

/// Size of the largest component and the component-id map.
pub fn largest_component(g: &MultiGraph) -> (usize, Vec<Option<usize>>) {
    let c = components(g);
    (c.largest(), c.label)
}

/// Size of the component containing `node` (zero if the node was removed).
pub fn component_size_of(g: &MultiGraph, node: usize) -> usize {
    if !g.is_alive(node) {
        return 0;
    }
    union_graph(g).set_size(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons() {
        let g = MultiGraph::new(5, vec![]);
        assert_eq!(largest_component(&g).0, 1);
        assert_eq!(components(&g).sizes, vec![1; 5]);
    }

    #[test]
    fn path_plus_isolated() {
        let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (3, 3)]);
        let (size, label) = largest_component(&g);
        assert_eq!(size, 3);
        assert_eq!(label, vec![Some(0), Some(0), Some(0), Some(1)]);
        assert_eq!(component_size_of(&g, 2), 3);
        assert_eq!(component_size_of(&g, 3), 1);
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert!(uf.union(2, 3));
        assert!(uf.union(0, 3));
        assert_eq!(uf.set_size(2), 4);
    }
}
