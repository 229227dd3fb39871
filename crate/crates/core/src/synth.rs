//! Synthetic reference corpora: CLUS, EGO, GRID and TREE.
//!
//! Graph `i` of a corpus is built from its own substream of the corpus seed,
//! so corpora are identical whether built serially or in parallel.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::holme_kim;
use crate::distributions::{DegreeModel, DegreeSampler};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{substream, GraphRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusKind {
    Clus,
    Ego,
    Grid,
    Tree,
}

impl CorpusKind {
    pub fn name(self) -> &'static str {
        match self {
            CorpusKind::Clus => "clus",
            CorpusKind::Ego => "ego",
            CorpusKind::Grid => "grid",
            CorpusKind::Tree => "tree",
        }
    }
}

impl std::str::FromStr for CorpusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clus" => Ok(CorpusKind::Clus),
            "ego" => Ok(CorpusKind::Ego),
            "grid" => Ok(CorpusKind::Grid),
            "tree" => Ok(CorpusKind::Tree),
            _ => Err(Error::InvalidParameter(format!("unknown corpus kind `{s}`"))),
        }
    }
}

/// Inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRange {
    pub min: usize,
    pub max: usize,
}

impl SizeRange {
    pub const fn new(min: usize, max: usize) -> Self {
        SizeRange { min, max }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.gen_range(self.min..=self.max)
    }

    fn check(&self, name: &str, lo: usize, hi: usize) -> Result<()> {
        if self.min > self.max || self.min < lo || self.max > hi {
            return Err(Error::InvalidConfig(format!(
                "{name} range {}..={} must be non-empty and within {lo}..={hi}",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

/// Per-kind corpus parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CorpusParams {
    Grid {
        side: SizeRange,
    },
    Tree {
        size: SizeRange,
    },
    Clus {
        size: SizeRange,
        attach_m: usize,
        triad_p: f64,
    },
    Ego {
        /// Target mean ego-network size.
        mean_nodes: usize,
        /// Power-law exponent of the expected-degree sequence.
        exponent: f64,
    },
}

impl CorpusParams {
    /// Defaults sized after the reference corpora: 10x10 to 20x20 grids,
    /// 100 to 200 node trees, small dense Holme–Kim graphs and ego networks
    /// averaging 150 nodes.
    pub fn default_for(kind: CorpusKind) -> Self {
        match kind {
            CorpusKind::Grid => CorpusParams::Grid {
                side: SizeRange::new(10, 20),
            },
            CorpusKind::Tree => CorpusParams::Tree {
                size: SizeRange::new(100, 200),
            },
            CorpusKind::Clus => CorpusParams::Clus {
                size: SizeRange::new(12, 18),
                attach_m: 4,
                triad_p: 0.9,
            },
            CorpusKind::Ego => CorpusParams::Ego {
                mean_nodes: 150,
                exponent: 2.5,
            },
        }
    }

    pub fn kind(&self) -> CorpusKind {
        match self {
            CorpusParams::Grid { .. } => CorpusKind::Grid,
            CorpusParams::Tree { .. } => CorpusKind::Tree,
            CorpusParams::Clus { .. } => CorpusKind::Clus,
            CorpusParams::Ego { .. } => CorpusKind::Ego,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            CorpusParams::Grid { side } => side.check("grid side", 2, 64),
            CorpusParams::Tree { size } => size.check("tree size", 3, 100_000),
            CorpusParams::Clus {
                size,
                attach_m,
                triad_p,
            } => {
                size.check("clus size", 2, 100_000)?;
                if attach_m < 1 || attach_m >= size.min {
                    return Err(Error::InvalidConfig(format!(
                        "clus attach_m={attach_m} must be in 1..{}",
                        size.min
                    )));
                }
                if !(0.0..=1.0).contains(&triad_p) {
                    return Err(Error::InvalidConfig(format!("triad_p={triad_p} outside [0, 1]")));
                }
                Ok(())
            }
            CorpusParams::Ego {
                mean_nodes,
                exponent,
            } => {
                if mean_nodes < 10 {
                    return Err(Error::InvalidConfig(format!(
                        "ego mean_nodes={mean_nodes} must be at least 10"
                    )));
                }
                if !(exponent > 2.0 && exponent.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "ego exponent={exponent} must exceed 2"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub params: CorpusParams,
    pub count: usize,
    pub seed: u64,
}

impl CorpusSpec {
    /// Defaults for `kind` with 200 graphs.
    pub fn new(kind: CorpusKind, seed: u64) -> Self {
        CorpusSpec {
            params: CorpusParams::default_for(kind),
            count: 200,
            seed,
        }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidConfig("corpus count must be at least 1".into()));
        }
        self.params.validate()
    }

    /// Graph number `index` of the corpus.
    pub fn graph(&self, index: usize) -> Result<Graph> {
        let mut rng = substream(self.seed, index as u64);
        match self.params {
            CorpusParams::Grid { side } => {
                let a = side.sample(&mut rng);
                let b = side.sample(&mut rng);
                Ok(grid_graph(a, b))
            }
            CorpusParams::Tree { size } => {
                let n = size.sample(&mut rng);
                Ok(random_tree(n, &mut rng))
            }
            CorpusParams::Clus {
                size,
                attach_m,
                triad_p,
            } => {
                let n = size.sample(&mut rng);
                holme_kim(n, attach_m, triad_p, &mut rng)
            }
            CorpusParams::Ego {
                mean_nodes,
                exponent,
            } => ego_graph(mean_nodes, exponent, &mut rng),
        }
    }

    pub fn build(&self) -> Result<Vec<Graph>> {
        self.validate()?;
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..self.count).into_par_iter().map(|i| self.graph(i)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..self.count).map(|i| self.graph(i)).collect()
        }
    }
}

pub fn grid_corpus(spec: &CorpusSpec) -> Result<Vec<Graph>> {
    expect_kind(spec, CorpusKind::Grid)?;
    spec.build()
}

pub fn tree_corpus(spec: &CorpusSpec) -> Result<Vec<Graph>> {
    expect_kind(spec, CorpusKind::Tree)?;
    spec.build()
}

pub fn clus_corpus(spec: &CorpusSpec) -> Result<Vec<Graph>> {
    expect_kind(spec, CorpusKind::Clus)?;
    spec.build()
}

pub fn ego_corpus(spec: &CorpusSpec) -> Result<Vec<Graph>> {
    expect_kind(spec, CorpusKind::Ego)?;
    spec.build()
}

fn expect_kind(spec: &CorpusSpec, kind: CorpusKind) -> Result<()> {
    if spec.params.kind() != kind {
        return Err(Error::InvalidConfig(format!(
            "expected {} parameters, got {}",
            kind.name(),
            spec.params.kind().name()
        )));
    }
    Ok(())
}

/// `rows x cols` lattice; node `(r, c)` is `r * cols + c`.
pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let u = r * cols + c;
            if c + 1 < cols {
                edges.push((u, u + 1));
            }
            if r + 1 < rows {
                edges.push((u, u + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, edges).expect("lattice is simple")
}

/// Decodes a Prüfer sequence over nodes `0..seq.len() + 2`.
///
/// At each step the smallest current leaf is joined to the next sequence
/// element.
pub fn prufer_decode(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidNode { node: bad, n });
    }
    let mut remaining = vec![1usize; n];
    for &x in seq {
        remaining[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&u| remaining[u] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, x));
        remaining[x] -= 1;
        if remaining[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().expect("two nodes remain");
    let Reverse(b) = leaves.pop().expect("two nodes remain");
    edges.push((a, b));
    Graph::from_edges(n, edges)
}

/// Uniform random labelled tree on `n >= 2` nodes.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(&seq).expect("sequence within range")
}

/// Bound on realizations tried before an ego network is rejected as
/// degenerate.
const EGO_ATTEMPTS: usize = 32;

/// Ego network of the highest-degree node of a tree realizing a power-law
/// degree sequence.
fn ego_graph(mean_nodes: usize, exponent: f64, rng: &mut GraphRng) -> Result<Graph> {
    for _ in 0..EGO_ATTEMPTS {
        let Some(g) = power_law_tree(mean_nodes, exponent, rng) else {
            continue;
        };
        let hub = (0..g.node_count())
            .max_by_key(|&u| (g.neighbors(u).len(), Reverse(u)))
            .expect("non-empty graph");
        let ego = ego_network(&g, hub);
        if ego.node_count() >= 3 {
            return Ok(ego);
        }
    }
    Err(Error::InvalidConfig(format!(
        "no usable ego network after {EGO_ATTEMPTS} attempts"
    )))
}

/// The 1-hop ego network of `center`: the center, its neighbors and every
/// edge among them. The center becomes node 0.
pub fn ego_network(g: &Graph, center: usize) -> Graph {
    let mut nodes = vec![center];
    nodes.extend_from_slice(g.neighbors(center));
    g.induced(&nodes)
}

/// Random tree with a power-law degree sequence, or `None` when the drawn
/// sequence cannot be completed into a tree.
///
/// Expected degrees are `w_i = mean_nodes * (i + 1)^{-1/(exponent-1)}` for
/// every `i` with `w_i >= 1`; each node draws its degree from
/// `Poisson(w_i)` (at least 1). Leaves are appended until the degrees sum
/// to `2(T - 1)`, and the tree is decoded from a shuffled Prüfer sequence in
/// which node `i` appears `d_i - 1` times.
fn power_law_tree(mean_nodes: usize, exponent: f64, rng: &mut GraphRng) -> Option<Graph> {
    let alpha = 1.0 / (exponent - 1.0);
    let scale = mean_nodes as f64;
    let mut seq = Vec::new();
    let mut heavy = 0;
    while scale * ((heavy + 1) as f64).powf(-alpha) >= 1.0 {
        let w = scale * ((heavy + 1) as f64).powf(-alpha);
        let cap = (w + 10.0 * w.sqrt() + 10.0) as usize;
        let d = DegreeSampler::new(&DegreeModel::Poisson { lambda: w }, cap).ok()?.sample(rng).max(1);
        seq.extend(std::iter::repeat(heavy).take(d - 1));
        heavy += 1;
    }
    if heavy > seq.len() + 2 {
        return None;
    }
    seq.shuffle(rng);
    prufer_decode(&seq).ok()
}
