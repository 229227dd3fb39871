/// Binary sum tree over non-negative weights with point updates and
/// weighted search. Internal nodes are recomputed from their children, so
/// sums never accumulate subtraction error.
#[derive(Clone, Debug)]
pub(crate) struct SumTree {
    size: usize,
    tree: Vec<f64>,
}

impl SumTree {
    pub fn new(weights: &[f64]) -> Self {
        let size = weights.len().next_power_of_two().max(1);
        let mut tree = vec![0.0; 2 * size];
        tree[size..size + weights.len()].copy_from_slice(weights);
        for i in (1..size).rev() {
            tree[i] = tree[2 * i] + tree[2 * i + 1];
        }
        SumTree { size, tree }
    }

    pub fn total(&self) -> f64 {
        self.tree[1]
    }

    pub fn get(&self, i: usize) -> f64 {
        self.tree[self.size + i]
    }

    pub fn set(&mut self, i: usize, value: f64) {
        let mut at = self.size + i;
        self.tree[at] = value;
        while at > 1 {
            at /= 2;
            self.tree[at] = self.tree[2 * at] + self.tree[2 * at + 1];
        }
    }

    /// Sum of the weights at positions `..hi`.
    pub fn prefix(&self, hi: usize) -> f64 {
        self.range(0, hi)
    }

    fn range(&self, lo: usize, hi: usize) -> f64 {
        let (mut l, mut r) = (self.size + lo, self.size + hi);
        let mut sum = 0.0;
        while l < r {
            if l & 1 == 1 {
                sum += self.tree[l];
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                sum += self.tree[r];
            }
            l /= 2;
            r /= 2;
        }
        sum
    }

    /// Position whose cumulative interval contains `target`. Returns `None`
    /// when rounding runs onto a zero weight.
    pub fn find(&self, mut target: f64) -> Option<usize> {
        let mut at = 1;
        while at < self.size {
            let child = self.tree[2 * at];
            if target < child {
                at *= 2;
            } else {
                target -= child;
                at = 2 * at + 1;
            }
        }
        (self.tree[at] > 0.0).then_some(at - self.size)
    }
}
