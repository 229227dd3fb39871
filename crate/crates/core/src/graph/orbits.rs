//! Per-node orbit counts for connected graphlets on two to four nodes.
//!
//! Orbit numbering:
//!
//! | graphlet | orbits |
//! |---|---|
//! | edge | 0 |
//! | path on 3 | 1 end, 2 middle |
//! | triangle | 3 |
//! | path on 4 | 4 end, 5 inner |
//! | claw | 6 leaf, 7 center |
//! | 4-cycle | 8 |
//! | paw | 9 pendant, 10 triangle degree-2, 11 triangle degree-3 |
//! | diamond | 12 degree-2, 13 degree-3 |
//! | K4 | 14 |
//!
//! Counts are over induced subgraphs. Enumeration walks every connected
//! node set of size 3 and 4 exactly once (ESU-style extension from the
//! smallest node of the set).

use super::Graph;

pub const ORBIT_COUNT: usize = 15;

pub type OrbitCounts = [u64; ORBIT_COUNT];

pub fn orbit_counts(g: &Graph) -> Vec<OrbitCounts> {
    let n = g.node_count();
    let mut counts = vec![[0u64; ORBIT_COUNT]; n];
    for (u, row) in counts.iter_mut().enumerate() {
        row[0] = g.neighbors(u).len() as u64;
    }

    let mut sub = Vec::with_capacity(4);
    for root in 0..n {
        let ext: Vec<usize> = g.neighbors(root).iter().copied().filter(|&w| w > root).collect();
        sub.push(root);
        extend(g, &mut sub, ext, root, &mut counts);
        sub.pop();
    }
    counts
}

fn extend(
    g: &Graph,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    root: usize,
    counts: &mut [OrbitCounts],
) {
    match sub.len() {
        3 => classify3(g, sub, counts),
        4 => {
            classify4(g, sub, counts);
            return;
        }
        _ => {}
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &x in g.neighbors(w) {
            if x > root
                && !sub.contains(&x)
                && !sub.iter().any(|&s| g.has_edge(s, x))
                && !next.contains(&x)
            {
                next.push(x);
            }
        }
        sub.push(w);
        extend(g, sub, next, root, counts);
        sub.pop();
    }
}

fn classify3(g: &Graph, sub: &[usize], counts: &mut [OrbitCounts]) {
    let deg = local_degrees(g, sub);
    if deg[..3].iter().all(|&d| d == 2) {
        for &u in sub {
            counts[u][3] += 1;
        }
    } else {
        for (&u, &d) in sub.iter().zip(&deg) {
            counts[u][if d == 2 { 2 } else { 1 }] += 1;
        }
    }
}

fn classify4(g: &Graph, sub: &[usize], counts: &mut [OrbitCounts]) {
    let deg = local_degrees(g, sub);
    let edges: usize = deg.iter().sum::<usize>() / 2;
    let max = *deg.iter().max().expect("four nodes");
    for (&u, &d) in sub.iter().zip(&deg) {
        let orbit = match (edges, max, d) {
            (3, 2, 1) => 4,
            (3, 2, _) => 5,
            (3, 3, 1) => 6,
            (3, 3, _) => 7,
            (4, 2, _) => 8,
            (4, 3, 1) => 9,
            (4, 3, 2) => 10,
            (4, 3, _) => 11,
            (5, _, 2) => 12,
            (5, _, _) => 13,
            _ => 14,
        };
        counts[u][orbit] += 1;
    }
}

fn local_degrees(g: &Graph, sub: &[usize]) -> [usize; 4] {
    let mut deg = [0; 4];
    for i in 0..sub.len() {
        for j in i + 1..sub.len() {
            if g.has_edge(sub[i], sub[j]) {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
    }
    deg
}

/// Graphlets on 3 and 4 nodes as (node count, edges, orbit of each node).
const TEMPLATES: &[(usize, &[(usize, usize)], &[usize])] = &[
    (3, &[(0, 1), (1, 2)], &[1, 2, 1]),
    (3, &[(0, 1), (1, 2), (0, 2)], &[3, 3, 3]),
    (4, &[(0, 1), (1, 2), (2, 3)], &[4, 5, 5, 4]),
    (4, &[(0, 1), (0, 2), (0, 3)], &[7, 6, 6, 6]),
    (4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[8, 8, 8, 8]),
    (4, &[(0, 1), (1, 2), (2, 0), (2, 3)], &[10, 10, 11, 9]),
    (4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], &[13, 12, 13, 12]),
    (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], &[14, 14, 14, 14]),
];

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Orbit of each node of `sub` found by matching the induced subgraph
/// against every relabelling of every template.
fn match_template(g: &Graph, sub: &[usize]) -> Option<Vec<usize>> {
    let k = sub.len();
    for &(size, edges, orbits) in TEMPLATES.iter().filter(|t| t.0 == k) {
        for perm in permutations(size) {
            // template node t sits at sub[perm[t]]
            let same = (0..k).all(|a| {
                (a + 1..k).all(|b| {
                    let in_template = edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
                    in_template == g.has_edge(sub[perm[a]], sub[perm[b]])
                })
            });
            if same {
                let mut out = vec![0; k];
                for t in 0..k {
                    out[perm[t]] = orbits[t];
                }
                return Some(out);
            }
        }
    }
    None
}

/// Orbit counts by testing every 3- and 4-node subset against each
/// relabelling of each graphlet. `O(n^4)`; a reference for
/// [`orbit_counts`], not for real use.
pub fn orbit_counts_exhaustive(g: &Graph) -> Vec<OrbitCounts> {
    let n = g.node_count();
    let mut counts = vec![[0u64; ORBIT_COUNT]; n];
    for &(u, v) in g.edges() {
        counts[u][0] += 1;
        counts[v][0] += 1;
    }
    let mut visit = |sub: &[usize]| {
        if let Some(orbits) = match_template(g, sub) {
            for (&node, &o) in sub.iter().zip(&orbits) {
                counts[node][o] += 1;
            }
        }
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                visit(&[a, b, c]);
                for d in c + 1..n {
                    visit(&[a, b, c, d]);
                }
            }
        }
    }
    counts
}
