use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Result};
use crate::matrix::io::{next_number, tokens};

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted, so edge indices are
/// stable. Text formats and displays use 1-based labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return invalid(format!("edge ({a}, {b}) has an endpoint outside 0..{n}"));
            }
            if a == b {
                return invalid(format!("self-loop at vertex {a}"));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return invalid(format!("duplicate edge ({a}, {b})"));
            }
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|l| l.sort_unstable());
        Ok(Graph { n, edges, adj })
    }

    /// Builds from 1-based edge pairs.
    pub fn from_one_based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a == 0 || b == 0) {
            return invalid("1-based labels start at 1");
        }
        let shifted: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        Self::new(n, &shifted)
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Self::new(n, &edges).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges).expect("complete graph is simple")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, &edges).expect("Petersen graph is simple")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_index(a, b).is_some()
    }

    /// The subgraph induced on `vertices` (relabelled `0..k` in the given
    /// order) and, for each new edge, the index of the original edge.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            pos[v] = k;
        }
        let mut pairs = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
                pairs.push(((a, b), i));
            }
        }
        pairs.sort();
        let g = Graph::new(vertices.len(), &pairs.iter().map(|p| p.0).collect::<Vec<_>>()).expect("induced subgraph is simple");
        (g, pairs.into_iter().map(|p| p.1).collect())
    }

    /// The subgraph on the same vertices keeping the listed edge indices;
    /// returns the new graph and the original index of each kept edge.
    pub fn edge_subgraph(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let edges: Vec<_> = keep.iter().map(|&i| self.edges[i]).collect();
        (Graph::new(self.n, &edges).expect("subgraph is simple"), keep)
    }

    /// True iff the edge indices form a matching.
    pub fn is_matching(&self, edges: &[usize]) -> bool {
        let mut seen = vec![false; self.n];
        for &i in edges {
            let Some(&(u, v)) = self.edges.get(i) else {
                return false;
            };
            if seen[u] || seen[v] {
                return false;
            }
            seen[u] = true;
            seen[v] = true;
        }
        true
    }

    pub fn is_perfect_matching(&self, edges: &[usize]) -> bool {
        self.is_matching(edges) && 2 * edges.len() == self.n
    }

    /// Connected components of the subgraph induced on `vertices`, each
    /// sorted, ordered by smallest member.
    pub fn components_within(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.n];
        vertices.iter().for_each(|&v| inside[v] = true);
        let mut seen = vec![false; self.n];
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for &w in &self.adj[v] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Parses `n m` followed by `m` lines `u v` with 1-based labels.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut it = tokens(text);
        let n: usize = next_number(&mut it, "vertex count")?;
        let m: usize = next_number(&mut it, "edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let a: usize = next_number(&mut it, "edge endpoint")?;
            let b: usize = next_number(&mut it, "edge endpoint")?;
            edges.push((a, b));
        }
        if it.next().is_some() {
            return invalid("trailing data after the edge list");
        }
        Graph::from_one_based(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
        write!(f, "Graph(n={}, [{}])", self.n, edges.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_lookup() {
        let g = Graph::new(4, &[(2, 1), (0, 1), (3, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2)]);
        assert_eq!(g.edge_index(3, 0), Some(1));
        assert_eq!(g.neighbors(0), &[1, 3]);
        assert!(Graph::new(3, &[(0, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, &[(0, 3)]).is_err());
        assert_eq!(Graph::petersen().m(), 15);
        assert!(Graph::petersen().neighbors(4).len() == 3);
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::parse("# path\n3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(Graph::parse("3 2\n1 2\n").is_err());
        assert!(Graph::parse("3 1\n0 2\n").is_err());
    }

    #[test]
    fn matchings_and_components() {
        let g = Graph::cycle(4);
        assert!(g.is_perfect_matching(&[0, 3]));
        assert!(!g.is_matching(&[0, 1]));
        let two = Graph::new(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(two.components_within(&[4, 3, 2, 1, 0]), vec![vec![0, 1], vec![2], vec![3, 4]]);
        let (sub, map) = g.induced(&[3, 0, 1]);
        assert_eq!(sub.m(), 2);
        assert_eq!(map.len(), 2);
    }
}
