//! Classical random-graph baselines: Erdős–Rényi, Barabási–Albert and
//! Watts–Strogatz.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hsg::max_edges;

/// A baseline generator with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaselineSpec {
    ErProbability { n: usize, p: f64 },
    ErEdges { n: usize, m: usize },
    Ba { n: usize, attach_m: usize },
    Ws { n: usize, ring_k: usize, rewire_p: f64 },
}

impl BaselineSpec {
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match *self {
            BaselineSpec::ErProbability { n, p } => er_gnp(n, p, rng),
            BaselineSpec::ErEdges { n, m } => er_gnm(n, m, rng),
            BaselineSpec::Ba { n, attach_m } => ba(n, attach_m, rng),
            BaselineSpec::Ws { n, ring_k, rewire_p } => ws(n, ring_k, rewire_p, rng),
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidConfig(msg)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("need at least 2 nodes, got {n}")));
    }
    Ok(())
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// G(n, p): every pair independently with probability `p`.
pub fn er_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_n(n)?;
    check_probability("p", p)?;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// G(n, m): `m` distinct pairs chosen uniformly.
pub fn er_gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    check_n(n)?;
    let total = max_edges(n);
    if m > total {
        return Err(invalid(format!("{m} edges exceed the maximum {total} for {n} nodes")));
    }
    let pair = |idx: usize| {
        // row-major index over the strict upper triangle
        let mut u = 0;
        let mut rest = idx;
        while rest >= n - 1 - u {
            rest -= n - 1 - u;
            u += 1;
        }
        (u, u + 1 + rest)
    };
    let mut chosen: Vec<usize> = index::sample(rng, total, m).into_vec();
    chosen.sort_unstable();
    Graph::from_edges(n, chosen.into_iter().map(pair))
}

/// Barabási–Albert growth from a star on `attach_m + 1` nodes. Each new
/// node links to `attach_m` distinct existing nodes chosen proportionally to
/// degree. Edge count is `attach_m * (n - attach_m)`.
pub fn ba<R: Rng + ?Sized>(n: usize, attach_m: usize, rng: &mut R) -> Result<Graph> {
    check_n(n)?;
    if attach_m < 1 || attach_m >= n {
        return Err(invalid(format!(
            "attach_m must satisfy 1 <= attach_m < n, got attach_m={attach_m}, n={n}"
        )));
    }
    let mut edges: Vec<(usize, usize)> = (1..=attach_m).map(|leaf| (0, leaf)).collect();
    // every node appears once per incident edge
    let mut endpoints: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut targets = HashSet::with_capacity(attach_m);
    let mut picked = Vec::with_capacity(attach_m);
    for source in attach_m + 1..n {
        targets.clear();
        picked.clear();
        while picked.len() < attach_m {
            let t = *endpoints.choose(rng).expect("seed star has edges");
            if targets.insert(t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            edges.push((t, source));
            endpoints.push(t);
            endpoints.push(source);
        }
    }
    Graph::from_edges(n, edges)
}

/// Holme–Kim growth: Barabási–Albert attachment where each link after the
/// first is, with probability `triad_p`, replaced by a triangle-closing link
/// to a neighbor of the previous target.
pub fn holme_kim<R: Rng + ?Sized>(n: usize, attach_m: usize, triad_p: f64, rng: &mut R) -> Result<Graph> {
    check_n(n)?;
    check_probability("triad_p", triad_p)?;
    if attach_m < 1 || attach_m >= n {
        return Err(invalid(format!(
            "attach_m must satisfy 1 <= attach_m < n, got attach_m={attach_m}, n={n}"
        )));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut add = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize| {
        adj[u].push(v);
        adj[v].push(u);
        edges.push((u, v));
    };
    for leaf in 1..=attach_m {
        add(&mut adj, 0, leaf);
    }
    let mut endpoints: Vec<usize> = (1..=attach_m).flat_map(|leaf| [0, leaf]).collect();
    for source in attach_m + 1..n {
        let mut pool = Vec::with_capacity(attach_m);
        while pool.len() < attach_m {
            let t = *endpoints.choose(rng).expect("seed star has edges");
            if !pool.contains(&t) {
                pool.push(t);
            }
        }
        let mut target = pool.pop().expect("attach_m >= 1");
        add(&mut adj, source, target);
        let mut linked = vec![target];
        while linked.len() < attach_m {
            let mut closed = false;
            if rng.gen_bool(triad_p) {
                let options: Vec<usize> = adj[target]
                    .iter()
                    .copied()
                    .filter(|&x| x != source && !adj[source].contains(&x))
                    .collect();
                if let Some(&x) = options.choose(rng) {
                    add(&mut adj, source, x);
                    linked.push(x);
                    closed = true;
                }
            }
            if !closed {
                target = loop {
                    match pool.pop() {
                        Some(t) if adj[source].contains(&t) => continue,
                        Some(t) => break Some(t),
                        None => break None,
                    }
                }
                .or_else(|| {
                    // pool exhausted by triad steps: fall back to a fresh
                    // degree-proportional draw
                    let fresh: Vec<usize> = endpoints
                        .iter()
                        .copied()
                        .filter(|&t| t != source && !adj[source].contains(&t))
                        .collect();
                    fresh.choose(rng).copied()
                })
                .ok_or_else(|| invalid("no attachment target left".into()))?;
                add(&mut adj, source, target);
                linked.push(target);
            }
        }
        for &t in &linked {
            endpoints.push(t);
            endpoints.push(source);
        }
    }
    Graph::from_edges(n, edges)
}

/// Watts–Strogatz: ring lattice with `ring_k / 2` neighbors per side, then
/// each lattice edge keeps its near endpoint and moves its far endpoint to a
/// uniform non-neighbor with probability `rewire_p`.
pub fn ws<R: Rng + ?Sized>(n: usize, ring_k: usize, rewire_p: f64, rng: &mut R) -> Result<Graph> {
    check_n(n)?;
    check_probability("rewire_p", rewire_p)?;
    if ring_k % 2 != 0 || ring_k >= n {
        return Err(invalid(format!(
            "ring_k must be even and below n, got ring_k={ring_k}, n={n}"
        )));
    }
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    let mut lattice = Vec::with_capacity(n * ring_k / 2);
    for j in 1..=ring_k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
            lattice.push((u, v));
        }
    }
    for &(u, v) in &lattice {
        if !rng.gen_bool(rewire_p) || adj[u].len() >= n - 1 {
            continue;
        }
        let w = loop {
            let w = rng.gen_range(0..n);
            if w != u && !adj[u].contains(&w) {
                break w;
            }
        };
        adj[u].remove(&v);
        adj[v].remove(&u);
        adj[u].insert(w);
        adj[w].insert(u);
    }
    let edges = (0..n).flat_map(|u| {
        let mut out: Vec<(usize, usize)> = adj[u].iter().filter(|&&v| u < v).map(|&v| (u, v)).collect();
        out.sort_unstable();
        out
    });
    Graph::from_edges(n, edges)
}
