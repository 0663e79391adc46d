//! Multifunctions, their weights, and the generators `Y_I`.
//!
//! A function `f : I → V` of the graph sends each `v ∈ I` either to itself
//! (a loop) or along an out-edge. Its weight multiplies `A_v` for every loop
//! and `X_w` for every edge `v → w`; the normalized weight further divides by
//! `∏_{v∈I} X_v`. `Y_I` sums the normalized weights of the *acyclic*
//! functions on `I`, those whose only cycles are loops.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex, VertexMultiset, VertexSet, MAX_VERTICES};
use crate::laurent::LaurentPoly;
use crate::multiset::Multiset;

/// `Ỹ(v, w)` as a `(x ++ a)` exponent increment.
fn bump(key: &mut [i32], n: usize, v: Vertex, w: Vertex) {
    if v == w {
        key[n + v.index()] += 1;
    } else {
        key[w.index()] += 1;
    }
}

/// A directed multigraph whose out-degree at `v` is the multiplicity of `v`
/// in its domain; every non-loop edge is an edge of the ambient graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multifunction {
    domain: VertexMultiset,
    edges: Multiset<(Vertex, Vertex)>,
}

impl Multifunction {
    /// The multifunction with the given edge multiset; the domain is read
    /// off the out-degrees.
    pub fn new(g: &Digraph, edges: Multiset<(Vertex, Vertex)>) -> Result<Self> {
        let mut domain = VertexMultiset::new();
        for (&(v, w), &k) in &edges {
            g.check_subset(VertexSet::singleton(v).with(w))?;
            if v != w && !g.has_edge(v, w) {
                return Err(Error::InvalidMultifunction(format!(
                    "{} -> {} is neither a loop nor an edge",
                    g.label(v),
                    g.label(w)
                )));
            }
            domain.insert_many(v, k);
        }
        Ok(Multifunction { domain, edges })
    }

    /// Like [`Multifunction::new`], additionally checking that the
    /// out-degrees match `domain`.
    pub fn on_domain(g: &Digraph, domain: &VertexMultiset, edges: Multiset<(Vertex, Vertex)>) -> Result<Self> {
        let f = Self::new(g, edges)?;
        if &f.domain != domain {
            return Err(Error::InvalidMultifunction("out-degrees do not match the domain".into()));
        }
        Ok(f)
    }

    pub fn empty() -> Self {
        Multifunction { domain: VertexMultiset::new(), edges: Multiset::new() }
    }

    pub fn domain(&self) -> &VertexMultiset {
        &self.domain
    }

    pub fn edges(&self) -> &Multiset<(Vertex, Vertex)> {
        &self.edges
    }

    /// True when the only cycles are loops.
    pub fn is_acyclic(&self) -> bool {
        let mut out = [VertexSet::EMPTY; MAX_VERTICES];
        let mut live = VertexSet::EMPTY;
        for (&(v, w), _) in &self.edges {
            live.insert(v);
            live.insert(w);
            if v != w {
                out[v.index()].insert(w);
            }
        }
        // Peel sinks until nothing changes; a cycle survives the peeling.
        loop {
            let sinks: VertexSet = live.iter().filter(|v| out[v.index()].is_disjoint(live)).collect();
            if sinks.is_empty() {
                return live.is_empty();
            }
            live = live.difference(sinks);
        }
    }

    pub fn weight(&self, nvars: usize) -> LaurentPoly {
        let mut key = vec![0i32; 2 * nvars];
        for (&(v, w), &k) in &self.edges {
            for _ in 0..k {
                bump(&mut key, nvars, v, w);
            }
        }
        LaurentPoly::monomial(nvars, &key[..nvars], &to_u32(&key[nvars..]), 1)
    }

    pub fn normalized_weight(&self, nvars: usize) -> LaurentPoly {
        let mut shift = vec![0i32; nvars];
        for (v, &k) in &self.domain {
            shift[v.index()] -= k as i32;
        }
        self.weight(nvars).shift_x(&shift).expect("exponents are small")
    }

    /// `f + g`: domains and edge multisets add.
    pub fn sum(&self, other: &Self) -> Self {
        Multifunction {
            domain: self.domain.sum(&other.domain),
            edges: self.edges.sum(&other.edges),
        }
    }

    /// Number of ways to write `self` as a sum `f_1 + f_2 + …` of functions
    /// on fixed sets whose multiset sum is the domain: at each vertex `v`
    /// the `|g_v|` edges leaving `v` are dealt to the `|g_v|` sets holding
    /// `v`, giving `∏_v |g_v|! / ∏_e m_e!`.
    pub fn split_count(&self) -> u128 {
        fn factorial(n: u32) -> u128 {
            (1..=n as u128).product()
        }
        let mut count = 1u128;
        for (v, &k) in &self.domain {
            let repeats: u128 = self
                .edges
                .iter()
                .filter(|((tail, _), _)| tail == v)
                .map(|(_, &m)| factorial(m))
                .product();
            count *= factorial(k) / repeats;
        }
        count
    }
}

fn to_u32(a: &[i32]) -> Vec<u32> {
    a.iter().map(|&e| e as u32).collect()
}

/// A function `f : I → V` on a vertex *set*, stored as sorted pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Function {
    pairs: SmallVec<[(Vertex, Vertex); 8]>,
}

impl Function {
    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn domain(&self) -> VertexSet {
        self.pairs.iter().map(|&(v, _)| v).collect()
    }

    pub fn image_of(&self, v: Vertex) -> Option<Vertex> {
        self.pairs
            .binary_search_by_key(&v, |&(s, _)| s)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn to_multifunction(&self) -> Multifunction {
        Multifunction {
            domain: self.pairs.iter().map(|&(v, _)| v).collect(),
            edges: self.pairs.iter().copied().collect(),
        }
    }

    fn key(&self, nvars: usize) -> SmallVec<[i32; 16]> {
        let mut key: SmallVec<[i32; 16]> = smallvec::smallvec![0; 2 * nvars];
        for &(v, w) in &self.pairs {
            key[v.index()] -= 1;
            bump(&mut key, nvars, v, w);
        }
        key
    }

    pub fn normalized_weight(&self, nvars: usize) -> LaurentPoly {
        let key = self.key(nvars);
        LaurentPoly::monomial(nvars, &key[..nvars], &to_u32(&key[nvars..]), 1)
    }

    /// Splits `f` into its cycles (the periodic parts of length ≥ 2) and the
    /// acyclic function on the remaining vertices.
    pub fn decompose(&self) -> (CycleFamily, Function) {
        let domain = self.domain();
        let mut cycles: Vec<Cycle> = Vec::new();
        let mut on_cycle = VertexSet::EMPTY;
        for v in domain {
            let mut seen = Vec::new();
            let mut cur = v;
            while domain.contains(cur) && !seen.contains(&cur) && !on_cycle.contains(cur) {
                seen.push(cur);
                cur = self.image_of(cur).unwrap();
            }
            if let Some(start) = seen.iter().position(|&u| u == cur) {
                let periodic = &seen[start..];
                if periodic.len() >= 2 {
                    let c = Cycle::canonical(periodic.to_vec());
                    on_cycle = on_cycle.union(c.vertex_set());
                    cycles.push(c);
                }
            }
        }
        cycles.sort();
        let rest = self
            .pairs
            .iter()
            .copied()
            .filter(|&(v, _)| !on_cycle.contains(v))
            .collect();
        (CycleFamily { cycles }, Function { pairs: rest })
    }

    /// Adds the edges of every cycle in `family`; inverse of
    /// [`Function::decompose`].
    pub fn with_cycles(&self, family: &CycleFamily) -> Function {
        let mut pairs: SmallVec<[(Vertex, Vertex); 8]> = self.pairs.clone();
        for c in &family.cycles {
            pairs.extend(c.edges());
        }
        pairs.sort();
        Function { pairs }
    }
}

/// Depth-first enumeration of functions on a vertex set, in lexicographic
/// order of the choice vector (self-loop first, then out-neighbours in
/// vertex order). With `acyclic_only`, partial assignments that close a
/// cycle of length ≥ 2 are pruned.
#[derive(Debug)]
pub struct Functions {
    verts: Vec<Vertex>,
    choices: Vec<Vec<Vertex>>,
    slot: [u8; MAX_VERTICES],
    next_choice: Vec<usize>,
    assign: Vec<Vertex>,
    depth: usize,
    acyclic_only: bool,
    done: bool,
}

const UNASSIGNED: u8 = u8::MAX;

impl Functions {
    fn new(g: &Digraph, set: VertexSet, acyclic_only: bool) -> Result<Self> {
        g.check_subset(set)?;
        let verts: Vec<Vertex> = set.iter().collect();
        let choices = verts
            .iter()
            .map(|&v| std::iter::once(v).chain(g.out_neighbors(v)).collect())
            .collect();
        let mut slot = [UNASSIGNED; MAX_VERTICES];
        for (i, v) in verts.iter().enumerate() {
            slot[v.index()] = i as u8;
        }
        let k = verts.len();
        Ok(Functions {
            verts,
            choices,
            slot,
            next_choice: vec![0; k],
            assign: vec![Vertex::new(0); k],
            depth: 0,
            acyclic_only,
            done: false,
        })
    }

    /// Whether sending `verts[d]` to `w` closes a cycle through the
    /// already-assigned prefix.
    fn closes_cycle(&self, d: usize, w: Vertex) -> bool {
        let v = self.verts[d];
        if w == v {
            return false;
        }
        let mut cur = w;
        loop {
            if cur == v {
                return true;
            }
            let i = self.slot[cur.index()];
            if i == UNASSIGNED || i as usize >= d {
                return false;
            }
            let next = self.assign[i as usize];
            if next == cur {
                return false;
            }
            cur = next;
        }
    }
}

impl Iterator for Functions {
    type Item = Function;

    fn next(&mut self) -> Option<Function> {
        let k = self.verts.len();
        loop {
            if self.done {
                return None;
            }
            if self.depth == k {
                let f = Function { pairs: self.verts.iter().copied().zip(self.assign.iter().copied()).collect() };
                if k == 0 {
                    self.done = true;
                } else {
                    self.depth -= 1;
                }
                return Some(f);
            }
            let d = self.depth;
            if self.next_choice[d] < self.choices[d].len() {
                let w = self.choices[d][self.next_choice[d]];
                self.next_choice[d] += 1;
                if self.acyclic_only && self.closes_cycle(d, w) {
                    continue;
                }
                self.assign[d] = w;
                self.depth += 1;
                if self.depth < k {
                    self.next_choice[self.depth] = 0;
                }
            } else if d == 0 {
                self.done = true;
            } else {
                self.depth -= 1;
            }
        }
    }
}

/// All acyclic functions on `set`.
pub fn enumerate_acyclic_functions(g: &Digraph, set: VertexSet) -> Result<Functions> {
    Functions::new(g, set, true)
}

/// All functions on `set`, acyclic or not.
pub fn enumerate_all_functions(g: &Digraph, set: VertexSet) -> Result<Functions> {
    Functions::new(g, set, false)
}

/// `Y_I` by direct enumeration of the acyclic functions on `I`.
pub fn compute_y(g: &Digraph, set: VertexSet) -> Result<LaurentPoly> {
    let n = g.vertex_count();
    let raw = enumerate_acyclic_functions(g, set)?.map(|f| (f.key(n), 1i64));
    LaurentPoly::from_raw_terms(n, raw)
}

/// A directed cycle of length ≥ 2, rotated to start at its minimal vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cycle(Vec<Vertex>);

impl Cycle {
    fn canonical(mut verts: Vec<Vertex>) -> Self {
        let min_at = verts.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap_or(0);
        verts.rotate_left(min_at);
        Cycle(verts)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }
}

/// Pairwise vertex-disjoint cycles, sorted by minimal vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CycleFamily {
    cycles: Vec<Cycle>,
}

impl CycleFamily {
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.cycles.iter().fold(VertexSet::EMPTY, |acc, c| acc.union(c.vertex_set()))
    }

    /// The cycles as one multifunction on their vertex set.
    pub fn to_multifunction(&self) -> Multifunction {
        let edges: Multiset<(Vertex, Vertex)> = self.cycles.iter().flat_map(Cycle::edges).collect();
        Multifunction { domain: edges.iter().map(|(&(v, _), _)| v).collect(), edges }
    }
}

/// Simple cycles of length ≥ 2 in the subgraph induced on `set`, each found
/// once from its minimal vertex.
pub fn simple_cycles(g: &Digraph, set: VertexSet) -> Result<Vec<Cycle>> {
    g.check_subset(set)?;
    fn extend(g: &Digraph, allowed: VertexSet, start: Vertex, path: &mut Vec<Vertex>, on_path: VertexSet, out: &mut Vec<Cycle>) {
        let last = *path.last().unwrap();
        for w in g.out_neighbors(last) {
            if w == start && path.len() >= 2 {
                out.push(Cycle(path.clone()));
            } else if allowed.contains(w) && !on_path.contains(w) {
                path.push(w);
                extend(g, allowed, start, path, on_path.with(w), out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in set {
        let allowed: VertexSet = set.iter().filter(|&u| u > s).collect();
        extend(g, allowed, s, &mut vec![s], VertexSet::singleton(s), &mut out);
    }
    out.sort();
    Ok(out)
}

/// Every family of pairwise vertex-disjoint cycles in the subgraph induced
/// on `set`, starting with the empty family.
pub fn enumerate_cycle_families(g: &Digraph, set: VertexSet) -> Result<Vec<CycleFamily>> {
    let cycles = simple_cycles(g, set)?;
    fn grow(cycles: &[Cycle], from: usize, used: VertexSet, chosen: &mut Vec<Cycle>, out: &mut Vec<CycleFamily>) {
        out.push(CycleFamily { cycles: chosen.clone() });
        for i in from..cycles.len() {
            let vs = cycles[i].vertex_set();
            if vs.is_disjoint(used) {
                chosen.push(cycles[i].clone());
                grow(cycles, i + 1, used.union(vs), chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(&cycles, 0, VertexSet::EMPTY, &mut Vec::new(), &mut out);
    Ok(out)
}

/// A graph together with a memo table for its `Y_I`.
///
/// The memo is the only shared mutable state in the crate. Inserts are
/// idempotent (a key always maps to the same polynomial), so concurrent
/// callers may race on a miss without harm.
#[derive(Debug)]
pub struct LpAlgebra {
    graph: Digraph,
    y_memo: RwLock<HashMap<VertexSet, Arc<LaurentPoly>>>,
}

impl LpAlgebra {
    pub fn new(graph: Digraph) -> Self {
        LpAlgebra { graph, y_memo: RwLock::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn nvars(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Memoized [`compute_y`].
    pub fn y(&self, set: VertexSet) -> Result<Arc<LaurentPoly>> {
        if let Some(p) = self.y_memo.read().unwrap().get(&set) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(compute_y(&self.graph, set)?);
        let mut memo = self.y_memo.write().unwrap();
        Ok(Arc::clone(memo.entry(set).or_insert(p)))
    }

    /// The strongly connected components `J` of `I` with their `Y_J`; their
    /// product is `Y_I`.
    pub fn y_scc_factorization(&self, set: VertexSet) -> Result<Vec<(VertexSet, Arc<LaurentPoly>)>> {
        self.graph
            .strongly_connected_components(set)?
            .into_iter()
            .map(|c| Ok((c, self.y(c)?)))
            .collect()
    }

    /// `∏ Y_I` over the given sets (with repetition).
    pub fn y_product<'a>(&self, sets: impl IntoIterator<Item = &'a VertexSet>) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::one(self.nvars());
        for &s in sets {
            if !s.is_empty() {
                acc = acc.try_mul(&*self.y(s)?)?;
            }
        }
        Ok(acc)
    }

    /// `π(U, S) = ∏_{v∈U} X_v ∏_{I∈S} Y_I`.
    pub fn monomial(&self, u: &VertexMultiset, s: &Multiset<VertexSet>) -> Result<LaurentPoly> {
        let ys = self.y_product(s.iter_repeated())?;
        ys.mul_x_multiset(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{dense4, set};

    fn v(i: usize) -> Vertex {
        Vertex::new(i - 1)
    }

    fn edges(list: &[(usize, usize)]) -> Multiset<(Vertex, Vertex)> {
        list.iter().map(|&(a, b)| (v(a), v(b))).collect()
    }

    #[test]
    fn multifunction_weights() {
        let g = dense4();
        let f1 = Multifunction::new(&g, edges(&[(1, 1), (1, 2), (1, 2), (2, 3)])).unwrap();
        let f2 = Multifunction::new(&g, edges(&[(3, 4), (4, 1)])).unwrap();
        assert_eq!(f1.domain(), &[v(1), v(1), v(1), v(2)].into_iter().collect());
        assert_eq!(f1.weight(4), LaurentPoly::monomial(4, &[0, 2, 1, 0], &[1, 0, 0, 0], 1));
        assert_eq!(f2.weight(4), LaurentPoly::monomial(4, &[1, 0, 0, 1], &[0; 4], 1));
        assert_eq!(f1.normalized_weight(4), LaurentPoly::monomial(4, &[-3, 1, 1, 0], &[1, 0, 0, 0], 1));
        assert_eq!(f2.normalized_weight(4), LaurentPoly::monomial(4, &[1, 0, -1, 0], &[0; 4], 1));
        let f3 = f1.sum(&f2);
        assert_eq!(f3.weight(4), LaurentPoly::monomial(4, &[1, 2, 1, 1], &[1, 0, 0, 0], 1));
        assert_eq!(f3.normalized_weight(4), LaurentPoly::monomial(4, &[-2, 1, 0, 0], &[1, 0, 0, 0], 1));
        assert!(f1.is_acyclic() && f2.is_acyclic() && !f3.is_acyclic());
        assert_eq!(f1.sum(&Multifunction::empty()), f1);
        assert_eq!(Multifunction::empty().weight(4), LaurentPoly::one(4));
    }

    #[test]
    fn cycle_has_unit_normalized_weight() {
        let g = dense4();
        let c = Multifunction::new(&g, edges(&[(3, 4), (4, 3)])).unwrap();
        assert_eq!(c.normalized_weight(4), LaurentPoly::one(4));
        assert!(!c.is_acyclic());
    }

    #[test]
    fn invalid_multifunctions() {
        let g = dense4();
        assert!(matches!(
            Multifunction::new(&g, edges(&[(2, 4)])),
            Err(Error::InvalidMultifunction(_))
        ));
        let dom: VertexMultiset = [v(1)].into_iter().collect();
        assert!(Multifunction::on_domain(&g, &dom, edges(&[(1, 2), (1, 1)])).is_err());
    }

    #[test]
    fn eleven_acyclic_functions_on_a_pair() {
        let g = dense4();
        let i = set(&g, &["1", "2"]);
        let fs: Vec<Function> = enumerate_acyclic_functions(&g, i).unwrap().collect();
        assert_eq!(fs.len(), 11);
        assert!(!fs.iter().any(|f| f.pairs() == [(v(1), v(2)), (v(2), v(1))]));
        assert_eq!(enumerate_all_functions(&g, i).unwrap().count(), 12);
        assert!(fs.iter().all(|f| f.to_multifunction().is_acyclic()));
        // Deterministic order: loop at 1 first, then the loop at 2.
        assert_eq!(fs[0].pairs(), [(v(1), v(1)), (v(2), v(2))]);
    }

    #[test]
    fn empty_domain_has_one_function() {
        let g = dense4();
        assert_eq!(enumerate_acyclic_functions(&g, VertexSet::EMPTY).unwrap().count(), 1);
        assert_eq!(compute_y(&g, VertexSet::EMPTY).unwrap(), LaurentPoly::one(4));
    }

    #[test]
    fn singleton_y() {
        let g = dense4();
        let y = compute_y(&g, set(&g, &["2"])).unwrap();
        // (A_2 + X_1 + X_3) / X_2
        let expected = &(&LaurentPoly::a(4, v(2)) + &LaurentPoly::x(4, v(1))) + &LaurentPoly::x(4, v(3));
        assert_eq!(y, expected.shift_x(&[0, -1, 0, 0]).unwrap());
    }

    #[test]
    fn cycles_of_a_two_cycle() {
        let g = dense4();
        let fams = enumerate_cycle_families(&g, set(&g, &["1", "2"])).unwrap();
        assert_eq!(fams.len(), 2);
        assert!(fams[0].is_empty());
        assert_eq!(fams[1].cycles()[0].vertices(), [v(1), v(2)]);
        assert_eq!(enumerate_cycle_families(&g, VertexSet::EMPTY).unwrap(), vec![CycleFamily::default()]);
    }

    #[test]
    fn simple_cycles_found_once() {
        let g = Digraph::numbered(3, &[(1, 2), (2, 3), (3, 1), (1, 3), (3, 2), (2, 1)]).unwrap();
        let cycles = simple_cycles(&g, g.all()).unwrap();
        // Three 2-cycles and the two orientations of the triangle.
        assert_eq!(cycles.len(), 5);
        assert!(cycles.iter().all(|c| c.vertices()[0] == c.vertex_set().first().unwrap()));
    }

    #[test]
    fn decomposition_roundtrip_small() {
        let g = dense4();
        for f in enumerate_all_functions(&g, g.all()).unwrap() {
            let (cycles, rest) = f.decompose();
            assert!(rest.to_multifunction().is_acyclic());
            assert_eq!(rest.domain(), g.all().difference(cycles.vertex_set()));
            assert_eq!(rest.with_cycles(&cycles), f);
        }
    }

    #[test]
    fn memo_returns_same_value() {
        let alg = LpAlgebra::new(dense4());
        let i = set(alg.graph(), &["1", "2"]);
        assert_eq!(*alg.y(i).unwrap(), compute_y(alg.graph(), i).unwrap());
        assert!(Arc::ptr_eq(&alg.y(i).unwrap(), &alg.y(i).unwrap()));
    }
}
