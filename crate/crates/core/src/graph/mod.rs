//! Simple undirected graphs and the combinatorial counts the closed-form
//! energies depend on.

mod families;
mod graph6;
mod walk;

pub use families::{circular_ladder, complete, cycle, dragon, generate, moebius_ladder, path, petersen, star};
pub use graph6::{emit_graph6, parse_graph6};
pub use walk::{walk_step, MAX_SWAP_ATTEMPTS};

use serde::Serialize;

use crate::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically, so two
/// graphs with the same labelled edge set compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Counts of the vertices adjacent only to the left endpoint, only to the
/// right endpoint, and to both endpoints of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeNeighborhood {
    pub d_left: usize,
    pub d_right: usize,
    pub d_shared: usize,
}

/// Edges of a cubic graph classified by how many triangles contain them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubicEdgeTypeCounts {
    pub m0: usize,
    pub m1: usize,
    pub m2: usize,
}

impl Graph {
    /// Builds a graph, normalising each pair to `u < v`.
    ///
    /// Self-loops, duplicate edges and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self { n, edges: list })
    }

    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        match deg.first() {
            None => Some(0),
            Some(&d) => deg.iter().all(|&x| x == d).then_some(d),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Number of 3-cliques.
    pub fn triangle_count(&self) -> usize {
        let adj = self.adjacency();
        self.edges
            .iter()
            .map(|&(u, v)| {
                // count each triangle once, from its two smallest vertices
                sorted_intersection(&adj[u], &adj[v]).filter(|&w| w > v).count()
            })
            .sum()
    }

    /// Left / right / shared neighbour counts of edge `(u, v)`; "left" is the
    /// endpoint given first.
    pub fn edge_neighborhood(&self, u: usize, v: usize) -> Result<EdgeNeighborhood> {
        if !self.has_edge(u, v) {
            return Err(Error::EdgeAbsent(u, v));
        }
        let adj = self.adjacency();
        let d_shared = sorted_intersection(&adj[u], &adj[v]).count();
        Ok(EdgeNeighborhood {
            d_left: adj[u].len() - 1 - d_shared,
            d_right: adj[v].len() - 1 - d_shared,
            d_shared,
        })
    }

    /// Number of triangles containing each edge, in edge-list order.
    pub fn edge_triangle_counts(&self) -> Vec<usize> {
        let adj = self.adjacency();
        self.edges
            .iter()
            .map(|&(u, v)| sorted_intersection(&adj[u], &adj[v]).count())
            .collect()
    }

    pub fn cubic_edge_type_counts(&self) -> Result<CubicEdgeTypeCounts> {
        if self.regular_degree() != Some(3) || self.n == 0 {
            return Err(Error::NotCubic);
        }
        let mut counts = CubicEdgeTypeCounts { m0: 0, m1: 0, m2: 0 };
        for t in self.edge_triangle_counts() {
            match t {
                0 => counts.m0 += 1,
                1 => counts.m1 += 1,
                2 => counts.m2 += 1,
                _ => unreachable!("an edge of a cubic graph lies in at most two triangles"),
            }
        }
        Ok(counts)
    }
}

fn sorted_intersection<'a>(a: &'a [usize], b: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    let mut i = 0;
    let mut j = 0;
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let x = a[i];
                    i += 1;
                    j += 1;
                    return Some(x);
                }
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_triangles(g: &Graph) -> usize {
        let n = g.n();
        let mut t = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        t += 1;
                    }
                }
            }
        }
        t
    }

    fn brute_neighborhood(g: &Graph, u: usize, v: usize) -> (usize, usize, usize) {
        let mut l = 0;
        let mut r = 0;
        let mut m = 0;
        for w in 0..g.n() {
            if w == u || w == v {
                continue;
            }
            match (g.has_edge(u, w), g.has_edge(v, w)) {
                (true, true) => m += 1,
                (true, false) => l += 1,
                (false, true) => r += 1,
                _ => {}
            }
        }
        (l, r, m)
    }

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edges_are_canonical() {
        let a = Graph::new(3, [(2, 1), (1, 0)]).unwrap();
        let b = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn triangle_counts_match_brute_force() {
        for spec in [
            "complete:4",
            "cycle:5",
            "cl:3",
            "ml:3",
            "petersen",
            "dragon",
            "complete:7",
        ] {
            let g = generate(spec).unwrap();
            assert_eq!(g.triangle_count(), brute_triangles(&g), "{spec}");
        }
        assert_eq!(generate("complete:4").unwrap().triangle_count(), 4);
        assert_eq!(generate("cycle:5").unwrap().triangle_count(), 0);
        assert_eq!(generate("cl:3").unwrap().triangle_count(), 2);
    }

    #[test]
    fn neighborhoods_match_brute_force() {
        let c6 = generate("cycle:6").unwrap();
        for &(u, v) in c6.edges() {
            let nb = c6.edge_neighborhood(u, v).unwrap();
            assert_eq!((nb.d_left, nb.d_right, nb.d_shared), brute_neighborhood(&c6, u, v));
            assert_eq!((nb.d_left, nb.d_right, nb.d_shared), (1, 1, 0));
        }
        let k4 = generate("complete:4").unwrap();
        for &(u, v) in k4.edges() {
            let nb = k4.edge_neighborhood(u, v).unwrap();
            assert_eq!((nb.d_left, nb.d_right, nb.d_shared), (0, 0, 2));
        }
        let p2 = generate("path:2").unwrap();
        let nb = p2.edge_neighborhood(0, 1).unwrap();
        assert_eq!((nb.d_left, nb.d_right, nb.d_shared), (0, 0, 0));
        let dragon = generate("dragon").unwrap();
        for &(u, v) in dragon.edges() {
            let nb = dragon.edge_neighborhood(u, v).unwrap();
            assert_eq!((nb.d_left, nb.d_right, nb.d_shared), brute_neighborhood(&dragon, u, v));
            let nb = dragon.edge_neighborhood(v, u).unwrap();
            assert_eq!((nb.d_left, nb.d_right, nb.d_shared), brute_neighborhood(&dragon, v, u));
        }
    }

    #[test]
    fn neighborhood_of_missing_edge() {
        let g = generate("path:3").unwrap();
        assert_eq!(g.edge_neighborhood(0, 2), Err(Error::EdgeAbsent(0, 2)));
    }

    #[test]
    fn cubic_edge_types() {
        let k4 = generate("complete:4").unwrap();
        assert_eq!(
            k4.cubic_edge_type_counts().unwrap(),
            CubicEdgeTypeCounts { m0: 0, m1: 0, m2: 6 }
        );
        let ml4 = generate("ml:4").unwrap();
        assert_eq!(
            ml4.cubic_edge_type_counts().unwrap(),
            CubicEdgeTypeCounts { m0: 12, m1: 0, m2: 0 }
        );
        let cl3 = generate("cl:3").unwrap();
        let c = cl3.cubic_edge_type_counts().unwrap();
        assert_eq!(c, CubicEdgeTypeCounts { m0: 3, m1: 6, m2: 0 });
        assert_eq!(3 * cl3.triangle_count(), c.m1 + 2 * c.m2);
        assert_eq!(
            generate("cycle:5").unwrap().cubic_edge_type_counts(),
            Err(Error::NotCubic)
        );
    }

    #[test]
    fn relabel_requires_permutation() {
        let g = generate("path:3").unwrap();
        assert!(g.relabel(&[0, 0, 1]).is_err());
        assert!(g.relabel(&[0, 1]).is_err());
        let h = g.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (0, 2)]);
    }
}
