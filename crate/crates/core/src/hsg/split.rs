use rand::Rng;

use super::sumtree::SumTree;
use super::PartialGraph;

/// Consecutive rejected light draws before the sampler gives up.
const LIGHT_MISSES: usize = 64;

/// Samples admissible pairs with probability proportional to `p[u] p[v]`,
/// splitting the nodes into the `heavy` heaviest and the rest.
///
/// Pairs inside the heavy set are drawn exactly from per-row weights kept
/// over adjacency bitmasks, with the free partner mass of each row summed
/// per 64 ranks. Pairs with a light endpoint are proposed from `p ⊗ p`
/// restricted to that region and kept when admissible. Choosing the region
/// by its proposal mass makes every accepted pair follow the target law,
/// and only the heavy set needs bookkeeping.
pub(crate) struct SplitSampler {
    order: Vec<usize>,
    rank: Vec<usize>,
    q: Vec<f64>,
    heavy: usize,
    words: usize,
    heavy_nodes: SumTree,
    light_nodes: SumTree,
    rows: SumTree,
    adj: Vec<u64>,
    blocks: Vec<f64>,
}

impl SplitSampler {
    pub fn new(partial: &PartialGraph, p: &[f64], heavy: usize) -> Self {
        let n = p.len();
        let mut order: Vec<usize> = (0..n)
            .filter(|&x| p[x] > 0.0 && partial.entries().has_spare(x))
            .collect();
        let by_weight = |&x: &usize| (std::cmp::Reverse(p[x].to_bits()), x);
        let heavy = order.len().min(heavy);
        if heavy < order.len() {
            order.select_nth_unstable_by_key(heavy, by_weight);
        }
        order[..heavy].sort_unstable_by_key(by_weight);
        let mut rank = vec![usize::MAX; n];
        for (i, &x) in order.iter().enumerate() {
            rank[x] = i;
        }
        let q: Vec<f64> = order.iter().map(|&x| p[x]).collect();
        let words = heavy.div_ceil(64);
        let mut adj = vec![0u64; heavy * words];
        for (i, &u) in order[..heavy].iter().enumerate() {
            for &x in partial.neighbors(u) {
                if rank[x] < heavy {
                    adj[i * words + rank[x] / 64] |= 1 << (rank[x] % 64);
                }
            }
        }
        let mut sampler = SplitSampler {
            heavy_nodes: SumTree::new(&q[..heavy]),
            light_nodes: SumTree::new(&q[heavy..]),
            rows: SumTree::new(&[]),
            order,
            rank,
            q,
            heavy,
            words,
            adj,
            blocks: vec![0.0; heavy * words],
        };
        for i in 0..heavy {
            for w in 0..i.div_ceil(64) {
                sampler.blocks[i * words + w] = sampler.block_weight(i, w);
            }
        }
        let rows: Vec<f64> = (0..heavy).map(|i| sampler.row_weight(i)).collect();
        sampler.rows = SumTree::new(&rows);
        sampler
    }

    /// Whether every candidate node is in the heavy set, so that draws are
    /// never rejected.
    pub fn is_complete(&self) -> bool {
        self.heavy == self.order.len()
    }

    /// Adds up to `want` edges. Returns the number added; fewer than `want`
    /// means no admissible pair is left or the light region kept proposing
    /// inadmissible pairs.
    pub fn fill<R: Rng + ?Sized>(&mut self, partial: &mut PartialGraph, want: usize, rng: &mut R) -> usize {
        let mut added = 0;
        let mut misses = 0;
        while added < want && misses < LIGHT_MISSES {
            let inner = 2.0 * self.rows.total();
            let (ph, pl) = (self.heavy_nodes.total(), self.light_nodes.total());
            let cross = 2.0 * ph * pl;
            let outer = cross + pl * pl;
            if !(inner + outer > 0.0) {
                break;
            }
            let x = rng.gen::<f64>() * (inner + outer);
            let pair = if x < inner {
                self.draw_inner(rng)
            } else if x - inner < cross {
                self.draw_heavy(rng).zip(self.draw_light(rng))
            } else {
                self.draw_light(rng).zip(self.draw_light(rng))
            };
            let Some((i, j)) = pair else {
                misses += 1;
                continue;
            };
            let inside = i < self.heavy && j < self.heavy;
            debug_assert!(!inside || partial.admissible(self.order[i], self.order[j]));
            if !inside && !partial.admissible(self.order[i], self.order[j]) {
                misses += 1;
                continue;
            }
            misses = 0;
            self.add(partial, i, j);
            added += 1;
        }
        added
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Ranks in word `w` that are heavier than `i` and not adjacent to it.
    fn free_bits(&self, i: usize, w: usize) -> u64 {
        let below = if (w + 1) * 64 <= i {
            u64::MAX
        } else {
            (1u64 << (i - w * 64)) - 1
        };
        !self.adj[i * self.words + w] & below
    }

    fn block_weight(&self, i: usize, w: usize) -> f64 {
        let mut bits = self.free_bits(i, w);
        let mut sum = 0.0;
        while bits != 0 {
            sum += self.q[w * 64 + bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        sum
    }

    fn row_blocks(&self, i: usize) -> &[f64] {
        &self.blocks[i * self.words..i * self.words + i.div_ceil(64)]
    }

    fn row_weight(&self, i: usize) -> f64 {
        self.q[i] * self.row_blocks(i).iter().sum::<f64>()
    }

    /// Takes partner `j` of weight `qj` out of row `i`, recomputing its
    /// block when the difference is lost to rounding.
    fn remove_partner(&mut self, i: usize, j: usize, qj: f64) {
        let at = i * self.words + j / 64;
        let reduced = self.blocks[at] - qj;
        self.blocks[at] = if reduced > 1e-9 * self.blocks[at] {
            reduced
        } else {
            self.block_weight(i, j / 64)
        };
        self.rows.set(i, self.row_weight(i));
    }

    fn draw_heavy<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        self.heavy_nodes.find(rng.gen::<f64>() * self.heavy_nodes.total())
    }

    fn draw_light<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let k = self.light_nodes.find(rng.gen::<f64>() * self.light_nodes.total())?;
        Some(self.heavy + k)
    }

    /// A heavy pair: a row by weight, then a heavier partner found block
    /// by block.
    fn draw_inner<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(usize, usize)> {
        let i = self.rows.find(rng.gen::<f64>() * self.rows.total())?;
        let blocks = self.row_blocks(i);
        let mut target = rng.gen::<f64>() * blocks.iter().sum::<f64>();
        let mut last = None;
        for (w, &mass) in blocks.iter().enumerate() {
            if mass <= 0.0 {
                continue;
            }
            if target >= mass {
                target -= mass;
                continue;
            }
            let mut bits = self.free_bits(i, w);
            while bits != 0 {
                let j = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.q[j] > 0.0 {
                    last = Some(j);
                    if target < self.q[j] {
                        return Some((i, j));
                    }
                    target -= self.q[j];
                }
            }
        }
        last.map(|j| (i, j))
    }

    fn add(&mut self, partial: &mut PartialGraph, i: usize, j: usize) {
        let (u, v) = (self.order[i], self.order[j]);
        partial.add_edge(u, v);
        if i < self.heavy && j < self.heavy {
            self.adj[i * self.words + j / 64] |= 1 << (j % 64);
            self.adj[j * self.words + i / 64] |= 1 << (i % 64);
            let (light, heavy) = (i.max(j), i.min(j));
            self.remove_partner(light, heavy, self.q[heavy]);
        }
        for x in [u, v] {
            if !partial.entries().has_spare(x) {
                self.retire(self.rank[x]);
            }
        }
    }

    /// Drops a node that reached the degree cap.
    fn retire(&mut self, k: usize) {
        let qk = self.q[k];
        self.q[k] = 0.0;
        if k >= self.heavy {
            self.light_nodes.set(k - self.heavy, 0.0);
            return;
        }
        self.heavy_nodes.set(k, 0.0);
        self.rows.set(k, 0.0);
        for i in k + 1..self.heavy {
            if self.q[i] > 0.0 && !self.adjacent(i, k) {
                self.remove_partner(i, k, qk);
            }
        }
    }
}
