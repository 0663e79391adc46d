//! Small-graph generators for exhaustive and seeded checks.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Digraph, Vertex, VertexSet};

/// Number of ordered pairs `(u, v)`, `u != v`, on `n` vertices.
fn slots(n: usize) -> usize {
    n * n.saturating_sub(1)
}

fn slot_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect()
}

fn from_code(n: usize, pairs: &[(usize, usize)], code: u64) -> Digraph {
    let mut out = vec![VertexSet::EMPTY; n];
    for (bit, &(u, v)) in pairs.iter().enumerate() {
        if code >> bit & 1 == 1 {
            out[u].insert(Vertex::new(v));
        }
    }
    Digraph::numbered_from_adjacency(out)
}

/// Every labelled digraph on `n` vertices (`2^(n(n-1))` of them).
///
/// Panics for `n > 5`; the count is already 2^30 at `n = 6`.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    assert!(n <= 5, "exhaustive labelled enumeration is limited to n <= 5");
    let pairs = slot_pairs(n);
    (0..1u64 << slots(n)).map(move |code| from_code(n, &pairs, code))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest edge code over all relabellings.
fn canonical_code(n: usize, pairs: &[(usize, usize)], perms: &[Vec<usize>], out: &[VertexSet]) -> u64 {
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u, v)).unwrap();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| out[u].iter().map(move |v| (u, v.index())))
        .collect();
    perms
        .iter()
        .map(|p| edges.iter().fold(0u64, |acc, &(u, v)| acc | 1 << index(p[u], p[v])))
        .min()
        .unwrap_or(0)
}

/// One representative per isomorphism class of digraphs on `n` vertices.
///
/// The representative is the relabelling with the smallest edge code.
pub fn digraphs_up_to_isomorphism(n: usize) -> Vec<Digraph> {
    assert!(n <= 4, "isomorphism-class enumeration is limited to n <= 4");
    let pairs = slot_pairs(n);
    let perms = permutations(n);
    let mut codes = BTreeSet::new();
    for code in 0..1u64 << slots(n) {
        let g = from_code(n, &pairs, code);
        let out: Vec<VertexSet> = g.vertices().map(|v| g.out_neighbors(v)).collect();
        codes.insert(canonical_code(n, &pairs, &perms, &out));
    }
    codes.into_iter().map(|c| from_code(n, &pairs, c)).collect()
}

/// Every labelled tree on `n` vertices, each edge in both directions,
/// decoded from Prüfer sequences.
pub fn labeled_trees(n: usize) -> Vec<Digraph> {
    match n {
        0 => return Vec::new(),
        1 => return vec![Digraph::numbered(1, &[]).unwrap()],
        2 => return vec![Digraph::numbered_undirected(2, &[(1, 2)]).unwrap()],
        _ => {}
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut trees = Vec::with_capacity(total);
    let mut seq = vec![0usize; len];
    for code in 0..total {
        let mut c = code;
        for slot in seq.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        trees.push(prufer_tree(n, &seq));
    }
    trees
}

fn prufer_tree(n: usize, seq: &[usize]) -> Digraph {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut out = vec![VertexSet::EMPTY; n];
    let mut link = |a: usize, b: usize| {
        out[a].insert(Vertex::new(b));
        out[b].insert(Vertex::new(a));
    };
    for &s in seq {
        let leaf = (0..n).find(|&i| degree[i] == 1).unwrap();
        link(leaf, s);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    link(rest[0], rest[1]);
    Digraph::numbered_from_adjacency(out)
}

/// One representative per isomorphism class of trees on `n` vertices.
pub fn trees_up_to_isomorphism(n: usize) -> Vec<Digraph> {
    assert!(n <= 8, "tree enumeration is limited to n <= 8");
    let pairs = slot_pairs(n);
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for t in labeled_trees(n) {
        let out: Vec<VertexSet> = t.vertices().map(|v| t.out_neighbors(v)).collect();
        if seen.insert(canonical_code(n, &pairs, &perms, &out)) {
            reps.push(t);
        }
    }
    reps
}

/// A seeded random digraph: each ordered pair is an edge with probability
/// `density`. The same `(n, density, seed)` always gives the same graph.
pub fn random_digraph(n: usize, density: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![VertexSet::EMPTY; n];
    for (u, v) in slot_pairs(n) {
        if rng.gen_bool(density) {
            out[u].insert(Vertex::new(v));
        }
    }
    Digraph::numbered_from_adjacency(out)
}
