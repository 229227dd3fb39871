//! Simple undirected graphs over dense node ids `0..n`.

mod orbits;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use orbits::{orbit_counts, orbit_counts_exhaustive, OrbitCounts, ORBIT_COUNT};

/// Simple undirected graph. Immutable once built.
///
/// Edges are stored canonically as `(u, v)` with `u < v`, sorted
/// lexicographically; adjacency lists are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge iterator, rejecting self-loops,
    /// duplicates (in either orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidNode { node: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidEdge {
                    u,
                    v,
                    reason: "self-loop",
                });
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge {
                u: w[0].0,
                v: w[0].1,
                reason: "duplicate edge",
            });
        }
        Ok(Self::from_canonical(n, canon))
    }

    /// Like [`Graph::from_edges`] but silently drops self-loops and
    /// duplicate edges.
    pub fn from_edges_lossy<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidNode { node: u.max(v), n });
            }
            if u != v {
                canon.push((u.min(v), u.max(v)));
            }
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_canonical(n, canon))
    }

    /// Builds a graph from symmetric adjacency lists of a simple graph.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
        }
        let edges = adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect();
        Graph { n: adj.len(), edges, adj }
    }

    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `u < v`, lexicographically sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbors of `u`. Panics if `u` is out of range.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u < self.n {
            Ok(())
        } else {
            Err(Error::InvalidNode { node: u, n: self.n })
        }
    }

    pub fn degree(&self, u: usize) -> Result<usize> {
        self.check_node(u)?;
        Ok(self.adj[u].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of triangles through `u`, by sorted-list intersection of
    /// neighbor sets.
    pub fn triangles_at(&self, u: usize) -> Result<usize> {
        self.check_node(u)?;
        let nu = &self.adj[u];
        let mut count = 0;
        for &v in nu {
            count += sorted_intersection_len(nu, &self.adj[v]);
        }
        Ok(count / 2)
    }

    /// Local clustering coefficient; zero for nodes of degree below two.
    pub fn clustering_coefficient(&self, u: usize) -> Result<f64> {
        let d = self.degree(u)?;
        if d < 2 {
            return Ok(0.0);
        }
        let t = self.triangles_at(u)?;
        Ok(2.0 * t as f64 / (d * (d - 1)) as f64)
    }

    pub fn clustering_coefficients(&self) -> Vec<f64> {
        (0..self.n)
            .map(|u| self.clustering_coefficient(u).expect("node in range"))
            .collect()
    }

    /// Breadth-first reachability from node 0. A graph with no nodes is
    /// treated as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.component_sizes().len() == 1
    }

    /// Sizes of connected components, in order of their smallest node.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut size = 0;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    /// Induced subgraph on `nodes` (relabelled to `0..nodes.len()` in the
    /// given order).
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &u) in nodes.iter().enumerate() {
            index[u] = i;
        }
        let mut edges = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &self.adj[u] {
                let j = index[v];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(nodes.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Degree histogram, clustering and orbit statistics in one pass.
    pub fn stats(&self) -> GraphStats {
        let mut degree_histogram = BTreeMap::new();
        for d in self.degrees() {
            *degree_histogram.entry(d).or_insert(0) += 1;
        }
        let avg_degree = if self.n == 0 {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / self.n as f64
        };
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        let sparsity = if pairs == 0 {
            0.0
        } else {
            self.edge_count() as f64 / pairs as f64
        };
        GraphStats {
            degree_histogram,
            clustering_per_node: self.clustering_coefficients(),
            orbit_counts: orbit_counts(self),
            avg_degree,
            sparsity,
        }
    }
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Structural summary of one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    /// degree -> number of nodes with that degree
    pub degree_histogram: BTreeMap<usize, usize>,
    pub clustering_per_node: Vec<f64>,
    pub orbit_counts: Vec<OrbitCounts>,
    pub avg_degree: f64,
    /// `M / (N (N - 1) / 2)`
    pub sparsity: f64,
}
