use std::collections::HashSet;

use super::{EntryList, SubstructureSet};
use crate::graph::Graph;

/// The graph under construction together with its entry list.
#[derive(Clone, Debug)]
pub struct PartialGraph {
    entries: EntryList,
    adj: Vec<Vec<usize>>,
    present: EdgeSet,
    edge_count: usize,
}

/// Largest node count stored as a dense bit matrix (8 MiB at the limit).
const DENSE_LIMIT: usize = 8192;

#[derive(Clone, Debug)]
enum EdgeSet {
    Dense { n: usize, bits: Vec<u64> },
    Sparse(HashSet<(usize, usize)>),
}

impl EdgeSet {
    fn new(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            EdgeSet::Dense {
                n,
                bits: vec![0; (n * n).div_ceil(64)],
            }
        } else {
            EdgeSet::Sparse(HashSet::new())
        }
    }

    fn contains(&self, (u, v): (usize, usize)) -> bool {
        match self {
            EdgeSet::Dense { n, bits } => {
                let i = u * n + v;
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            EdgeSet::Sparse(set) => set.contains(&(u, v)),
        }
    }

    /// Inserts or removes `(u, v)`; returns whether the set changed.
    fn set(&mut self, (u, v): (usize, usize), on: bool) -> bool {
        match self {
            EdgeSet::Dense { n, bits } => {
                let i = u * *n + v;
                let mask = 1u64 << (i % 64);
                let was = bits[i / 64] & mask != 0;
                if on {
                    bits[i / 64] |= mask;
                } else {
                    bits[i / 64] &= !mask;
                }
                was != on
            }
            EdgeSet::Sparse(set) if on => set.insert((u, v)),
            EdgeSet::Sparse(set) => set.remove(&(u, v)),
        }
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl PartialGraph {
    /// The star edges of `subs`, with entries capped at `cap`.
    pub fn from_substructures(subs: &SubstructureSet, cap: usize) -> Self {
        let n = subs.node_count();
        let mut g = PartialGraph {
            entries: EntryList::from_substructures(subs, cap),
            adj: vec![Vec::new(); n],
            present: EdgeSet::new(n),
            edge_count: 0,
        };
        for (a, leaf) in subs.star_edges() {
            g.adj[a].push(leaf);
            g.adj[leaf].push(a);
            g.present.set(key(a, leaf), true);
            g.edge_count += 1;
        }
        g
    }

    pub fn entries(&self) -> &EntryList {
        &self.entries
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges as `(u, v)` with `u < v`, grouped by `u`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.present.contains(key(u, v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Whether `(u, v)` can be added: distinct endpoints, not present, both
    /// below the degree cap.
    pub fn admissible(&self, u: usize, v: usize) -> bool {
        u != v && self.entries.has_spare(u) && self.entries.has_spare(v) && !self.has_edge(u, v)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.present.set(key(u, v), true);
        self.edge_count += 1;
        self.entries.increment(u);
        self.entries.increment(v);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        let k = key(u, v);
        if !self.present.set(k, false) {
            return;
        }
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
        self.edge_count -= 1;
        self.entries.decrement(u);
        self.entries.decrement(v);
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_adjacency(self.adj.clone())
    }
}
