use rand::seq::SliceRandom;
use rand::Rng;

use super::entries::MaskPolicy;
use super::exact::ExactSampler;
use super::split::SplitSampler;
use super::{DegreeWeights, GeneratorConfig, Observer, PartialGraph, Phase, ProbabilityList, ScanRecord};
use crate::error::{Error, Result};

/// Draw attempts per edge in a scan before the list is rebuilt.
const ATTEMPTS_PER_EDGE: usize = 50;

/// Largest heavy set tried by [`exact_fill`] before it falls back to
/// bookkeeping over every node.
const MAX_HEAVY: usize = 8192;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DensifyOutcome {
    pub added: usize,
    pub scans: usize,
    pub repairs: usize,
}

/// Stage 2b: add edges until the graph holds exactly `cfg.m`.
///
/// Every scan rebuilds the probability list, then draws `u` and `v`
/// independently from it until the scan's batch is placed or one edge uses
/// up its attempt budget. Self-loops, repeated edges and picks at the degree cap
/// are rejected. The batch is half the remaining edges (rounded up) with
/// `batch_halving`, otherwise one edge.
///
/// A scan that places nothing falls back to an exact draw over admissible
/// pairs weighted by `Pr(u) Pr(v)`; if no admissible pair exists at all, a
/// degree-preserving swap frees one (see [`repair`]).
pub fn densify_stage<R: Rng + ?Sized>(
    partial: &mut PartialGraph,
    cfg: &GeneratorConfig,
    weights: &DegreeWeights,
    rng: &mut R,
    observer: &mut dyn Observer,
) -> Result<DensifyOutcome> {
    let mut outcome = DensifyOutcome::default();
    while partial.edge_count() < cfg.m {
        let remaining = cfg.m - partial.edge_count();
        let batch = if cfg.batch_halving {
            remaining.div_ceil(2)
        } else {
            1
        };
        let list = ProbabilityList::build(partial.entries(), weights).ok();
        let mut accepted = 0;
        if let Some(list) = &list {
            observer.list_built(Phase::Densify, list, partial.entries());
            let mut attempts = 0;
            while accepted < batch && attempts < ATTEMPTS_PER_EDGE {
                attempts += 1;
                let u = list.sample(rng);
                let v = list.sample(rng);
                if partial.admissible(u, v) {
                    partial.add_edge(u, v);
                    accepted += 1;
                    attempts = 0;
                }
            }
            if accepted < batch {
                accepted += exact_fill(partial, list.weights(), batch - accepted, rng);
            }
        }
        observer.scan(&ScanRecord {
            index: outcome.scans,
            batch_size: batch,
            active_entries: list.as_ref().map_or(0, ProbabilityList::active_count),
            accepted,
        });
        outcome.scans += 1;
        outcome.added += accepted;
        if accepted > 0 {
            continue;
        }
        if exact_pair(partial, weights, rng) {
            outcome.added += 1;
        } else if repair(partial, rng) {
            outcome.added += 1;
            outcome.repairs += 1;
        } else {
            return Err(Error::ExhaustedCapacity(format!(
                "no admissible edge left with {} of {} edges placed",
                partial.edge_count(),
                cfg.m
            )));
        }
    }
    Ok(outcome)
}

/// Draws one admissible pair with probability proportional to
/// `Pr(u) Pr(v)`, first under the entry masks, then over every node with
/// spare capacity. Returns whether an edge was added.
fn exact_pair<R: Rng + ?Sized>(partial: &mut PartialGraph, weights: &DegreeWeights, rng: &mut R) -> bool {
    [MaskPolicy::Respect, MaskPolicy::CapacityOnly].into_iter().any(|policy| {
        ProbabilityList::build_filtered(partial.entries(), weights, policy, |_| true)
            .is_ok_and(|list| exact_fill(partial, list.weights(), 1, rng) == 1)
    })
}

/// Adds up to `want` edges, each drawn with probability proportional to
/// `p[u] p[v]` among the pairs admissible at that moment. This is the law
/// of an accepted draw when `u` and `v` are sampled independently from `p`
/// and rejected until admissible, without the cost of the rejections when
/// most of the mass sits on saturated or mutually adjacent nodes. Returns
/// the number of edges added.
fn exact_fill<R: Rng + ?Sized>(partial: &mut PartialGraph, p: &[f64], want: usize, rng: &mut R) -> usize {
    let mut added = 0;
    let mut heavy = (8 * want).clamp(64, 512);
    while heavy <= MAX_HEAVY {
        let mut sampler = SplitSampler::new(partial, p, heavy);
        added += sampler.fill(partial, want - added, rng);
        if added == want || sampler.is_complete() {
            return added;
        }
        heavy *= 4;
    }
    added + ExactSampler::new(partial, p).fill(partial, want - added, rng)
}

/// Places one more edge when no admissible pair exists but capacity remains.
///
/// Picks spare-capacity endpoints `u`, `v` (possibly `u == v` when one node
/// has two free slots) and an existing edge `(x, y)` with `x` not adjacent
/// to `u` and `y` not adjacent to `v`; replaces `(x, y)` by `(u, x)` and
/// `(v, y)`. Degrees of `x`, `y` are unchanged, `u` and `v` each gain one,
/// and connectivity is preserved.
pub(crate) fn repair<R: Rng + ?Sized>(partial: &mut PartialGraph, rng: &mut R) -> bool {
    let entries = partial.entries();
    let cap = entries.cap();
    let spare: Vec<usize> = (0..partial.node_count())
        .filter(|&x| entries.has_spare(x))
        .collect();
    let mut candidates = Vec::new();
    for (a, &u) in spare.iter().enumerate() {
        if entries.node_degree(u) + 2 <= cap {
            candidates.push((u, u));
        }
        for &v in &spare[a + 1..] {
            candidates.push((u, v));
        }
    }
    candidates.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = partial.edges().collect();
    edges.shuffle(rng);
    for &(u, v) in &candidates {
        for &(a, b) in &edges {
            for (x, y) in [(a, b), (b, a)] {
                if [u, v].contains(&x) || [u, v].contains(&y) {
                    continue;
                }
                if partial.has_edge(u, x) || partial.has_edge(v, y) {
                    continue;
                }
                partial.remove_edge(x, y);
                partial.add_edge(u, x);
                partial.add_edge(v, y);
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::{generate_observed, SubstructureSet};
    use crate::rng::seeded;

    #[test]
    fn nothing_to_add() {
        let cfg = GeneratorConfig::new(4, 3, 3);
        let subs = SubstructureSet::from_anchor_degrees(vec![3]);
        let mut partial = PartialGraph::from_substructures(&subs, 3);
        let weights = DegreeWeights::from_config(&cfg);
        let out = densify_stage(&mut partial, &cfg, &weights, &mut seeded(1), &mut ()).unwrap();
        assert_eq!(out, DensifyOutcome::default());
        assert_eq!(partial.edge_count(), 3);
    }

    #[test]
    fn repair_frees_capacity() {
        // 4-cycle at cap 2: no capacity left anywhere
        let subs = SubstructureSet::from_anchor_degrees(vec![1, 1]);
        let mut partial = PartialGraph::from_substructures(&subs, 2);
        partial.add_edge(1, 2);
        partial.add_edge(0, 3);
        assert!(!repair(&mut partial, &mut seeded(0)));

        // triangle plus a pendant pair (cap 2): nodes 3 and 4 are adjacent
        // and have spare capacity but (3, 4) already exists.
        let subs = SubstructureSet::from_anchor_degrees(vec![2, 1]);
        let mut partial = PartialGraph::from_substructures(&subs, 2);
        partial.add_edge(1, 2);
        assert!(!partial.admissible(3, 4));
        assert!(repair(&mut partial, &mut seeded(0)));
        let g = partial.to_graph();
        assert_eq!(g.edge_count(), 5);
        assert!(g.max_degree() <= 2);
        assert!(g.is_connected());
    }

    #[test]
    fn samplers_follow_product_weights() {
        // stars 0-{1,2} and 3-{4}, plus (1, 2); admissible pairs join {0,1,2} to {3,4}
        let subs = SubstructureSet::from_anchor_degrees(vec![2, 1]);
        let mut base = PartialGraph::from_substructures(&subs, 4);
        base.add_edge(1, 2);
        let p = [0.1, 0.3, 0.05, 0.35, 0.2];
        let pairs = [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)];
        let total: f64 = pairs.iter().map(|&(u, v)| p[u] * p[v]).sum();
        let draws = 20_000;
        let mut rng = seeded(11);
        for heavy in [0, 1, 2, 3, 5] {
            let mut counts = [0usize; 6];
            for _ in 0..draws {
                let mut partial = base.clone();
                let added = if heavy == 0 {
                    ExactSampler::new(&partial, &p).fill(&mut partial, 1, &mut rng)
                } else {
                    SplitSampler::new(&partial, &p, heavy).fill(&mut partial, 1, &mut rng)
                };
                assert_eq!(added, 1);
                let k = pairs.iter().position(|&(u, v)| partial.has_edge(u, v)).unwrap();
                counts[k] += 1;
            }
            for (k, &(u, v)) in pairs.iter().enumerate() {
                let expected = draws as f64 * p[u] * p[v] / total;
                let z = (counts[k] as f64 - expected) / expected.sqrt();
                assert!(z.abs() < 4.5, "heavy {heavy}, pair ({u}, {v}): {} vs {expected:.0}", counts[k]);
            }
        }
    }

    #[test]
    fn samplers_stop_when_nothing_is_admissible() {
        let subs = SubstructureSet::from_anchor_degrees(vec![2]);
        let mut partial = PartialGraph::from_substructures(&subs, 2);
        partial.add_edge(1, 2);
        let p = [0.5, 0.3, 0.2];
        assert_eq!(SplitSampler::new(&partial, &p, 1).fill(&mut partial, 3, &mut seeded(1)), 0);
        assert_eq!(ExactSampler::new(&partial, &p).fill(&mut partial, 3, &mut seeded(1)), 0);
        assert_eq!(exact_fill(&mut partial, &p, 1, &mut seeded(1)), 0);
    }

    #[test]
    fn scan_count_is_logarithmic() {
        struct Count(usize);
        impl Observer for Count {
            fn scan(&mut self, _: &ScanRecord) {
                self.0 += 1;
            }
        }
        let cfg = GeneratorConfig::new(200, 1024, 40).with_seed(3);
        let mut obs = Count(0);
        let g = generate_observed(&cfg, &mut obs).unwrap();
        assert_eq!(g.scans, obs.0);
        assert!((8..=14).contains(&obs.0), "scans = {}", obs.0);
    }
}
