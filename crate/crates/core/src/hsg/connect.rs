use rand::seq::SliceRandom;
use rand::Rng;

use super::entries::MaskPolicy;
use super::{DegreeWeights, GeneratorConfig, Observer, PartialGraph, Phase, ProbabilityList, SubstructureSet};
use crate::error::{Error, Result};

struct Components {
    parent: Vec<usize>,
    count: usize,
}

impl Components {
    fn new(n: usize) -> Self {
        Components {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
            self.count -= 1;
        }
    }
}

/// Stage 2a: one bridging edge per substructure.
///
/// For substructure `i`, `u` is drawn uniformly from its active non-anchors
/// (falling back to its anchor, then to any node of its component with spare
/// capacity). `v` is drawn from a freshly built probability list restricted
/// to nodes outside `i`'s current component, so every bridge while more than
/// one component remains merges two components. Once everything is
/// connected the remaining bridge only has to leave `i`. It is skipped when
/// the edge budget has no room for it (`M = N - 1`).
///
/// Returns the added edges in order.
pub fn connect_stage<R: Rng + ?Sized>(
    subs: &SubstructureSet,
    partial: &mut PartialGraph,
    cfg: &GeneratorConfig,
    weights: &DegreeWeights,
    rng: &mut R,
    observer: &mut dyn Observer,
) -> Result<Vec<(usize, usize)>> {
    let l = subs.len();
    let mut bridges = Vec::new();
    if l < 2 {
        return Ok(bridges);
    }
    let mut comps = Components::new(l);
    for i in 0..l {
        if partial.edge_count() >= cfg.m {
            break;
        }
        let u = pick_source(i, partial, &mut comps, rng)?;
        let entries = partial.entries();
        let root = comps.find(i);
        let merging = comps.count > 1;
        let sub_of: Vec<usize> = (0..l).map(|s| comps.find(s)).collect();
        let allow = |node: usize| {
            let s = entries.substructure_of(node);
            let outside = if merging { sub_of[s] != root } else { s != i };
            outside && node != u && !partial.has_edge(u, node)
        };
        let list = match ProbabilityList::build_filtered(entries, weights, MaskPolicy::Respect, allow) {
            Ok(list) => list,
            Err(_) => ProbabilityList::build_filtered(entries, weights, MaskPolicy::CapacityOnly, allow)
                .map_err(|_| {
                    Error::ExhaustedCapacity(format!(
                        "no node outside substructure {i} can take a bridging edge"
                    ))
                })?,
        };
        observer.list_built(Phase::Connect, &list, entries);
        let v = list.sample(rng);
        let j = entries.substructure_of(v);
        partial.add_edge(u, v);
        comps.union(i, j);
        bridges.push((u, v));
    }
    Ok(bridges)
}

fn pick_source<R: Rng + ?Sized>(
    i: usize,
    partial: &PartialGraph,
    comps: &mut Components,
    rng: &mut R,
) -> Result<usize> {
    let entries = partial.entries();
    let nodes = entries.nodes(i);
    let anchor = nodes.start;
    let leaves: Vec<usize> = (anchor + 1..nodes.end)
        .filter(|&x| !entries.is_masked(x))
        .collect();
    if let Some(&u) = leaves.choose(rng) {
        return Ok(u);
    }
    if entries.has_spare(anchor) {
        return Ok(anchor);
    }
    let root = comps.find(i);
    let spare: Vec<usize> = (0..entries.substructure_count())
        .filter(|&s| comps.find(s) == root)
        .flat_map(|s| entries.nodes(s))
        .filter(|&x| entries.has_spare(x))
        .collect();
    spare.choose(rng).copied().ok_or_else(|| {
        Error::ExhaustedCapacity(format!(
            "component of substructure {i} has no node below the degree cap"
        ))
    })
}
