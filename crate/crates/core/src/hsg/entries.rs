use std::ops::Range;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::{GeneratorConfig, SubstructureSet};
use crate::distributions::DegreeModel;
use crate::error::{Error, Result};

/// Per-substructure degree table with mask state.
///
/// Entry `(i, j)` is node `offset(i) + j`; `j == 0` is the anchor. Masking:
///
/// * a non-anchor is masked once its degree reaches the degree cap;
/// * an anchor is masked while any non-anchor of its substructure is still
///   active, and once it reaches the cap itself.
///
/// A substructure whose anchor and non-anchors are all at the cap is
/// therefore masked as a whole.
#[derive(Clone, Debug)]
pub struct EntryList {
    offsets: Vec<usize>,
    degrees: Vec<usize>,
    masked: Vec<bool>,
    active_non_anchors: Vec<usize>,
    cap: usize,
}

impl EntryList {
    /// Entry list for freshly built stars: anchors carry their star degree,
    /// non-anchors degree 1.
    pub fn from_substructures(subs: &SubstructureSet, cap: usize) -> Self {
        let n = subs.node_count();
        let mut offsets = subs.node_offsets.clone();
        offsets.push(n);
        let mut degrees = vec![1; n];
        for (i, &d) in subs.anchor_degrees.iter().enumerate() {
            degrees[offsets[i]] = d;
        }
        let l = subs.len();
        let mut entries = EntryList {
            offsets,
            degrees,
            masked: vec![false; n],
            active_non_anchors: vec![0; l],
            cap,
        };
        for i in 0..l {
            entries.refresh(i);
        }
        entries
    }

    pub fn substructure_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Node ids of substructure `i`; the first is the anchor.
    pub fn nodes(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Number of nodes in substructure `i` (anchor included).
    pub fn size(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn anchor(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn is_anchor(&self, node: usize) -> bool {
        self.offsets[self.substructure_of(node)] == node
    }

    pub fn substructure_of(&self, node: usize) -> usize {
        self.offsets.partition_point(|&o| o <= node) - 1
    }

    /// `(i, j)` coordinates of `node`.
    pub fn index_of(&self, node: usize) -> (usize, usize) {
        let i = self.substructure_of(node);
        (i, node - self.offsets[i])
    }

    /// Current degree of entry `(i, j)`.
    pub fn degree(&self, i: usize, j: usize) -> usize {
        self.degrees[self.offsets[i] + j]
    }

    pub fn node_degree(&self, node: usize) -> usize {
        self.degrees[node]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_masked(&self, node: usize) -> bool {
        self.masked[node]
    }

    pub fn has_spare(&self, node: usize) -> bool {
        self.degrees[node] < self.cap
    }

    pub fn active_count(&self) -> usize {
        self.masked.iter().filter(|m| !**m).count()
    }

    /// Whether substructure `i` still has a non-anchor below the cap.
    pub fn has_active_non_anchor(&self, i: usize) -> bool {
        self.active_non_anchors[i] > 0
    }

    pub(crate) fn increment(&mut self, node: usize) {
        self.degrees[node] += 1;
        self.update(node);
    }

    pub(crate) fn decrement(&mut self, node: usize) {
        self.degrees[node] -= 1;
        self.update(node);
    }

    fn update(&mut self, node: usize) {
        let i = self.substructure_of(node);
        let anchor = self.offsets[i];
        if node != anchor {
            let m = self.degrees[node] >= self.cap;
            if m != self.masked[node] {
                self.masked[node] = m;
                if m {
                    self.active_non_anchors[i] -= 1;
                } else {
                    self.active_non_anchors[i] += 1;
                }
            }
        }
        self.masked[anchor] = self.active_non_anchors[i] > 0 || self.degrees[anchor] >= self.cap;
    }

    fn refresh(&mut self, i: usize) {
        let range = self.nodes(i);
        let anchor = range.start;
        let mut active = 0;
        for node in anchor + 1..range.end {
            let m = self.degrees[node] >= self.cap;
            self.masked[node] = m;
            if !m {
                active += 1;
            }
        }
        self.active_non_anchors[i] = active;
        self.masked[anchor] = active > 0 || self.degrees[anchor] >= self.cap;
    }
}

/// Log-space selection weights `ln(N_sub / N) + ln P(deg + 1)` for every
/// degree a node can reach.
#[derive(Clone, Debug)]
pub struct DegreeWeights {
    n: usize,
    ln_next_mass: Vec<f64>,
}

impl DegreeWeights {
    pub fn new(model: &DegreeModel, n: usize) -> Self {
        let ln_next_mass = (0..=n).map(|d| model.ln_mass(d + 1)).collect();
        DegreeWeights { n, ln_next_mass }
    }

    pub fn from_config(cfg: &GeneratorConfig) -> Self {
        Self::new(&cfg.model(), cfg.n)
    }

    /// `(sub_size / N) * P(degree + 1)`, not normalized.
    pub fn raw(&self, sub_size: usize, degree: usize) -> f64 {
        self.ln_raw(sub_size, degree).exp()
    }

    fn ln_raw(&self, sub_size: usize, degree: usize) -> f64 {
        let ln_mass = self
            .ln_next_mass
            .get(degree)
            .copied()
            .unwrap_or(f64::NEG_INFINITY);
        (sub_size as f64 / self.n as f64).ln() + ln_mass
    }
}

/// Normalized selection weights over all entries (`plist`) with their
/// `(i, j)` coordinates (`nlist`). Masked or excluded entries weigh 0.
#[derive(Clone, Debug)]
pub struct ProbabilityList {
    plist: Vec<f64>,
    nlist: Vec<(usize, usize)>,
    sampler: WeightedIndex<f64>,
}

/// Which entries a list may select.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum MaskPolicy {
    /// Entry masks as maintained by the [`EntryList`].
    Respect,
    /// Any entry with spare capacity, anchors included.
    CapacityOnly,
}

impl ProbabilityList {
    pub fn build(entries: &EntryList, weights: &DegreeWeights) -> Result<Self> {
        Self::build_filtered(entries, weights, MaskPolicy::Respect, |_| true)
    }

    pub(crate) fn build_filtered<F>(
        entries: &EntryList,
        weights: &DegreeWeights,
        policy: MaskPolicy,
        allow: F,
    ) -> Result<Self>
    where
        F: Fn(usize) -> bool,
    {
        let n = entries.node_count();
        let mut ln = Vec::with_capacity(n);
        let mut nlist = Vec::with_capacity(n);
        for i in 0..entries.substructure_count() {
            let size = entries.size(i);
            for (j, node) in entries.nodes(i).enumerate() {
                nlist.push((i, j));
                let selectable = match policy {
                    MaskPolicy::Respect => !entries.is_masked(node),
                    MaskPolicy::CapacityOnly => entries.has_spare(node),
                } && allow(node);
                ln.push(if selectable {
                    Some(weights.ln_raw(size, entries.node_degree(node)))
                } else {
                    None
                });
            }
        }
        let selectable = ln.iter().filter(|w| w.is_some()).count();
        if selectable == 0 {
            return Err(Error::ExhaustedCapacity("every entry is masked".into()));
        }
        let top = ln
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut plist: Vec<f64> = if top.is_finite() {
            ln.iter()
                .map(|w| w.map_or(0.0, |l| (l - top).exp()))
                .collect()
        } else {
            // every selectable entry has zero model mass: fall back to uniform
            ln.iter().map(|w| if w.is_some() { 1.0 } else { 0.0 }).collect()
        };
        let total: f64 = plist.iter().sum();
        for p in &mut plist {
            *p /= total;
        }
        let sampler = WeightedIndex::new(&plist).expect("positive total weight");
        Ok(ProbabilityList {
            plist,
            nlist,
            sampler,
        })
    }

    /// Normalized weights, parallel to [`ProbabilityList::indices`].
    pub fn weights(&self) -> &[f64] {
        &self.plist
    }

    pub fn indices(&self) -> &[(usize, usize)] {
        &self.nlist
    }

    pub fn active_count(&self) -> usize {
        self.plist.iter().filter(|&&p| p > 0.0).count()
    }

    /// Draws a node id. Entries are laid out in node order, so the list
    /// position is the node id.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }
}

/// Builds the probability list for `entries` under `cfg`'s degree model.
pub fn build_probability_list(entries: &EntryList, cfg: &GeneratorConfig) -> Result<ProbabilityList> {
    ProbabilityList::build(entries, &DegreeWeights::from_config(cfg))
}
