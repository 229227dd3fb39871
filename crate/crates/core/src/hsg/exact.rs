use rand::Rng;

use super::sumtree::SumTree;
use super::PartialGraph;

/// Ranks whose adjacency is kept as bits on every node.
const TOP: usize = 256;
const WORDS: usize = TOP / 64;

/// Samples admissible pairs `(u, v)` with probability proportional to
/// `p[u] p[v]` from a frozen weight vector while edges are being added.
///
/// Nodes are ranked by weight and every pair is filed under its lighter
/// endpoint, so a row's partners are the heavier nodes: short to scan for
/// heavy rows and rarely adjacent for light ones. Adjacency to the
/// heaviest ranks is mirrored in bitmasks, which keeps the scans cheap
/// once those ranks have become hubs.
pub(crate) struct ExactSampler {
    order: Vec<usize>,
    rank: Vec<usize>,
    q: Vec<f64>,
    rows: SumTree,
    nodes: SumTree,
    top: Vec<[u64; WORDS]>,
    marks: Vec<bool>,
}

impl ExactSampler {
    pub fn new(partial: &PartialGraph, p: &[f64]) -> Self {
        let n = p.len();
        let mut order: Vec<usize> = (0..n)
            .filter(|&x| p[x] > 0.0 && partial.entries().has_spare(x))
            .collect();
        order.sort_unstable_by_key(|&x| (std::cmp::Reverse(p[x].to_bits()), x));
        let mut rank = vec![usize::MAX; n];
        for (i, &x) in order.iter().enumerate() {
            rank[x] = i;
        }
        let q: Vec<f64> = order.iter().map(|&x| p[x]).collect();
        let mut top = vec![[0u64; WORDS]; order.len()];
        let mut taken = vec![0.0; order.len()];
        for (a, b) in partial.edges() {
            let (ra, rb) = (rank[a], rank[b]);
            if ra == usize::MAX || rb == usize::MAX {
                continue;
            }
            let (heavy, light) = (ra.min(rb), ra.max(rb));
            taken[light] += q[heavy];
            if heavy < TOP {
                top[light][heavy / 64] |= 1 << (heavy % 64);
            }
            if light < TOP {
                top[heavy][light / 64] |= 1 << (light % 64);
            }
        }
        let mut sampler = ExactSampler {
            nodes: SumTree::new(&q),
            rows: SumTree::new(&[]),
            order,
            rank,
            q,
            top,
            marks: vec![false; n],
        };
        let mut before = 0.0;
        let mut rows = Vec::with_capacity(sampler.order.len());
        for (i, &qi) in sampler.q.iter().enumerate() {
            let free = before - taken[i];
            rows.push(if free > 1e-9 * before { qi * free } else { f64::NAN });
            before += qi;
        }
        for i in 0..rows.len() {
            if rows[i].is_nan() {
                rows[i] = sampler.row_weight(partial, i);
            }
        }
        sampler.rows = SumTree::new(&rows);
        sampler
    }

    /// Adds up to `want` edges. Returns the number added.
    pub fn fill<R: Rng + ?Sized>(&mut self, partial: &mut PartialGraph, want: usize, rng: &mut R) -> usize {
        let mut added = 0;
        let mut misses = 0;
        while added < want && misses < 64 {
            let total = self.rows.total();
            if !(total > 0.0) {
                break;
            }
            let Some(i) = self.rows.find(rng.gen::<f64>() * total) else {
                misses += 1;
                continue;
            };
            let Some(j) = self.draw_partner(partial, i, rng) else {
                let exact = self.row_weight(partial, i);
                self.rows.set(i, exact);
                misses += 1;
                continue;
            };
            misses = 0;
            self.add(partial, i, j);
            added += 1;
        }
        added
    }

    fn adjacent(&self, partial: &PartialGraph, i: usize, j: usize) -> bool {
        if j < TOP {
            self.top[i][j / 64] >> (j % 64) & 1 == 1
        } else {
            partial.has_edge(self.order[i], self.order[j])
        }
    }

    /// `q[i]` times the weight of the admissible heavier partners of rank `i`.
    fn row_weight(&mut self, partial: &PartialGraph, i: usize) -> f64 {
        let u = self.order[i];
        for &x in partial.neighbors(u) {
            self.marks[x] = true;
        }
        let mass: f64 = (0..i)
            .filter(|&j| !self.marks[self.order[j]])
            .map(|j| self.q[j])
            .sum();
        for &x in partial.neighbors(u) {
            self.marks[x] = false;
        }
        self.q[i] * mass
    }

    /// Draws a rank `j < i` with probability proportional to `q[j]` among
    /// nodes not adjacent to `order[i]`: by rejection against the prefix
    /// when most of it is admissible, otherwise by a cumulative scan from
    /// the heaviest rank.
    fn draw_partner<R: Rng + ?Sized>(&mut self, partial: &PartialGraph, i: usize, rng: &mut R) -> Option<usize> {
        let mass = self.rows.get(i) / self.q[i];
        let prefix = self.nodes.prefix(i);
        if !(prefix > 0.0 && mass > 0.0) {
            return None;
        }
        if prefix < 8.0 * mass {
            for _ in 0..32 {
                if let Some(j) = self.nodes.find(rng.gen::<f64>() * prefix) {
                    if j < i && !self.adjacent(partial, i, j) {
                        return Some(j);
                    }
                }
            }
        }
        let mut target = rng.gen::<f64>() * mass;
        let mut last = None;
        for j in 0..i.min(TOP) {
            if self.q[j] > 0.0 && !self.adjacent(partial, i, j) {
                last = Some(j);
                if target < self.q[j] {
                    return last;
                }
                target -= self.q[j];
            }
        }
        if i <= TOP {
            return last;
        }
        let u = self.order[i];
        for &x in partial.neighbors(u) {
            self.marks[x] = true;
        }
        for j in TOP..i {
            if self.q[j] > 0.0 && !self.marks[self.order[j]] {
                last = Some(j);
                if target < self.q[j] {
                    break;
                }
                target -= self.q[j];
            }
        }
        for &x in partial.neighbors(u) {
            self.marks[x] = false;
        }
        last
    }

    fn add(&mut self, partial: &mut PartialGraph, i: usize, j: usize) {
        let (u, v) = (self.order[i], self.order[j]);
        partial.add_edge(u, v);
        if j < TOP {
            self.top[i][j / 64] |= 1 << (j % 64);
        }
        if i < TOP {
            self.top[j][i / 64] |= 1 << (i % 64);
        }
        let row = self.rows.get(i);
        let reduced = row - self.q[i] * self.q[j];
        let updated = if reduced > 1e-9 * row {
            reduced
        } else {
            self.row_weight(partial, i)
        };
        self.rows.set(i, updated);
        for x in [u, v] {
            if !partial.entries().has_spare(x) {
                self.retire(partial, x);
            }
        }
    }

    /// Removes a node that reached the degree cap from every row.
    fn retire(&mut self, partial: &PartialGraph, x: usize) {
        let gone = self.rank[x];
        let qx = self.q[gone];
        self.q[gone] = 0.0;
        self.nodes.set(gone, 0.0);
        self.rows.set(gone, 0.0);
        for &y in partial.neighbors(x) {
            self.marks[y] = true;
        }
        let hit: Vec<usize> = (gone + 1..self.order.len())
            .filter(|&k| !self.marks[self.order[k]] && self.rows.get(k) > 0.0)
            .collect();
        for &y in partial.neighbors(x) {
            self.marks[y] = false;
        }
        for k in hit {
            let row = self.rows.get(k);
            let reduced = row - self.q[k] * qx;
            let updated = if reduced > 1e-9 * row {
                reduced
            } else {
                self.row_weight(partial, k)
            };
            self.rows.set(k, updated);
        }
    }
}
