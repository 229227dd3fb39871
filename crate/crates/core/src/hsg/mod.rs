//! Hierarchical scale-free generation.
//!
//! A run has three phases:
//!
//! 1. **parse**: split the `N` nodes into star substructures. The first star
//!    has `d_max` leaves; the remaining anchor degrees are drawn from the
//!    degree model (Poisson with `lambda = 2M/N` by default).
//! 2. **connect**: for every substructure, add one edge from one of its
//!    nodes to a node outside it, chosen from the probability list. The
//!    partner is restricted to a different connected component while more
//!    than one remains, so the result is always connected.
//! 3. **densify**: draw the remaining edges as independent node pairs from
//!    the probability list, rebuilding the list between scans.
//!
//! Selection weight of node `j` in substructure `i` is
//! `(N_sub(i) / N) * P(deg(j) + 1)`, normalized over unmasked entries.

mod connect;
mod densify;
mod entries;
mod exact;
mod partial;
mod split;
mod sumtree;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{truncation_k, DegreeModel, DegreeSampler};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

pub use connect::connect_stage;
pub use densify::densify_stage;
pub use entries::{build_probability_list, DegreeWeights, EntryList, ProbabilityList};
pub use partial::PartialGraph;

/// Inputs of a generation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub d_max: usize,
    /// `None` means Poisson with `lambda = 2M/N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_model: Option<DegreeModel>,
    #[serde(default = "yes")]
    pub use_truncation_k: bool,
    #[serde(default = "yes")]
    pub use_dmax_limit: bool,
    #[serde(default)]
    pub seed: u64,
    /// Each densify scan places up to half of the remaining edges from one
    /// frozen list. When off, the list is rebuilt after every edge.
    #[serde(default = "yes")]
    pub batch_halving: bool,
}

fn yes() -> bool {
    true
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, d_max: usize) -> Self {
        GeneratorConfig {
            n,
            m,
            d_max,
            degree_model: None,
            use_truncation_k: true,
            use_dmax_limit: true,
            seed: 0,
            batch_halving: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_model(mut self, model: DegreeModel) -> Self {
        self.degree_model = Some(model);
        self
    }

    pub fn with_limits(mut self, use_dmax_limit: bool, use_truncation_k: bool) -> Self {
        self.use_dmax_limit = use_dmax_limit;
        self.use_truncation_k = use_truncation_k;
        self
    }

    pub fn with_batch_halving(mut self, on: bool) -> Self {
        self.batch_halving = on;
        self
    }

    /// `2M / N`.
    pub fn avg_degree(&self) -> f64 {
        2.0 * self.m as f64 / self.n as f64
    }

    /// `M / (N (N - 1) / 2)`.
    pub fn sparsity(&self) -> f64 {
        self.m as f64 / max_edges(self.n) as f64
    }

    pub fn model(&self) -> DegreeModel {
        self.degree_model.unwrap_or(DegreeModel::Poisson {
            lambda: self.avg_degree(),
        })
    }

    /// `d_max` clamped to what a simple graph on `N` nodes allows.
    pub fn effective_d_max(&self) -> usize {
        self.d_max.min(self.n.saturating_sub(1))
    }

    /// Hard per-node degree cap used by masking and rejection.
    pub fn degree_cap(&self) -> usize {
        if self.use_dmax_limit {
            self.effective_d_max()
        } else {
            self.n - 1
        }
    }

    /// Largest anchor degree the parse stage may draw (the seed star is
    /// exempt).
    pub fn anchor_cap(&self) -> usize {
        let mut cap = self.degree_cap();
        if self.use_truncation_k {
            let k = truncation_k(self.avg_degree()).expect("validated config");
            cap = cap.min(k.saturating_sub(1));
        }
        cap.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n < 2 {
            return fail(format!("need at least 2 nodes, got {}", self.n));
        }
        if self.d_max < 1 {
            return fail("d_max must be at least 1".into());
        }
        if self.m + 1 < self.n {
            return fail(format!(
                "{} edges cannot connect {} nodes (need at least {})",
                self.m,
                self.n,
                self.n - 1
            ));
        }
        if self.m > max_edges(self.n) {
            return fail(format!(
                "{} edges exceed the simple-graph maximum {} for {} nodes",
                self.m,
                max_edges(self.n),
                self.n
            ));
        }
        if self.use_dmax_limit && self.m > self.n * self.effective_d_max() / 2 {
            return fail(format!(
                "{} edges exceed the degree budget floor({} * {} / 2)",
                self.m,
                self.n,
                self.effective_d_max()
            ));
        }
        if let Some(model) = &self.degree_model {
            model.validate()?;
        }
        Ok(())
    }
}

pub(crate) fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Output of the parse stage: consecutive stars over nodes `0..N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstructureSet {
    /// Anchor degree of every star; `anchor_degrees[0]` is the seed star.
    pub anchor_degrees: Vec<usize>,
    /// First node id of every star. The anchor is that node, its leaves
    /// follow it.
    pub node_offsets: Vec<usize>,
}

impl SubstructureSet {
    pub fn from_anchor_degrees(anchor_degrees: Vec<usize>) -> Self {
        let mut node_offsets = Vec::with_capacity(anchor_degrees.len());
        let mut next = 0;
        for &d in &anchor_degrees {
            node_offsets.push(next);
            next += d + 1;
        }
        SubstructureSet {
            anchor_degrees,
            node_offsets,
        }
    }

    pub fn len(&self) -> usize {
        self.anchor_degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchor_degrees.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.anchor_degrees.iter().map(|d| d + 1).sum()
    }

    pub fn anchors(&self) -> &[usize] {
        &self.node_offsets
    }

    /// Star edges `(anchor, leaf)` in node order.
    pub fn star_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.node_offsets
            .iter()
            .zip(&self.anchor_degrees)
            .flat_map(|(&a, &d)| (a + 1..=a + d).map(move |leaf| (a, leaf)))
    }
}

/// Stage 1: split the node budget into stars.
///
/// The seed star has `min(d_max, N - 1)` leaves. Further anchors are drawn
/// from the degree model restricted to `0..=cfg.anchor_cap()`; the last star
/// is clamped so exactly `N` nodes are used. A remainder of one node becomes
/// a lone anchor of degree 0.
pub fn parse_stage<R: Rng + ?Sized>(cfg: &GeneratorConfig, rng: &mut R) -> Result<SubstructureSet> {
    cfg.validate()?;
    let seed_degree = cfg.effective_d_max();
    let mut degrees = vec![seed_degree];
    let mut remaining = cfg.n - seed_degree - 1;
    if remaining > 0 {
        let sampler = DegreeSampler::new(&cfg.model(), cfg.anchor_cap())?;
        while remaining > 0 {
            let d = sampler.sample(rng).min(remaining - 1);
            degrees.push(d);
            remaining -= d + 1;
        }
    }
    Ok(SubstructureSet::from_anchor_degrees(degrees))
}

/// Generation phase, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Parse,
    Connect,
    Densify,
}

/// One densify scan: a probability-list rebuild followed by a batch of
/// draws against the frozen list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub index: usize,
    pub batch_size: usize,
    pub active_entries: usize,
    pub accepted: usize,
}

/// Hooks into a generation run. All methods default to no-ops.
pub trait Observer {
    fn phase_started(&mut self, _phase: Phase) {}
    fn phase_finished(&mut self, _phase: Phase) {}
    fn list_built(&mut self, _phase: Phase, _list: &ProbabilityList, _entries: &EntryList) {}
    fn scan(&mut self, _scan: &ScanRecord) {}
}

impl Observer for () {}

/// A finished run with the intermediate structure kept for inspection.
#[derive(Clone, Debug)]
pub struct Generation {
    pub graph: Graph,
    pub substructures: SubstructureSet,
    pub bridge_edges: Vec<(usize, usize)>,
    pub scans: usize,
    /// Edges placed by swap repair after sampling ran out of admissible
    /// pairs.
    pub repairs: usize,
}

/// Generates a graph with exactly `cfg.n` nodes and `cfg.m` edges.
pub fn generate(cfg: &GeneratorConfig) -> Result<Graph> {
    generate_observed(cfg, &mut ()).map(|g| g.graph)
}

/// [`generate`] with an observer attached and the intermediate structure
/// returned.
pub fn generate_observed(cfg: &GeneratorConfig, observer: &mut dyn Observer) -> Result<Generation> {
    cfg.validate()?;
    let mut rng = rng::seeded(cfg.seed);
    let weights = DegreeWeights::from_config(cfg);

    observer.phase_started(Phase::Parse);
    let subs = parse_stage(cfg, &mut rng)?;
    let mut partial = PartialGraph::from_substructures(&subs, cfg.degree_cap());
    observer.phase_finished(Phase::Parse);

    observer.phase_started(Phase::Connect);
    let bridge_edges = connect_stage(&subs, &mut partial, cfg, &weights, &mut rng, observer)?;
    observer.phase_finished(Phase::Connect);

    observer.phase_started(Phase::Densify);
    let outcome = densify_stage(&mut partial, cfg, &weights, &mut rng, observer)?;
    observer.phase_finished(Phase::Densify);

    let graph = partial.to_graph();
    if graph.edge_count() != cfg.m {
        return Err(Error::ExhaustedCapacity(format!(
            "placed {} of {} edges",
            graph.edge_count(),
            cfg.m
        )));
    }
    Ok(Generation {
        graph,
        substructures: subs,
        bridge_edges,
        scans: outcome.scans,
        repairs: outcome.repairs,
    })
}
