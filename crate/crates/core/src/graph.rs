//! Directed graphs on at most 64 labelled vertices, vertex sets as bitmasks,
//! and strongly connected components of induced subgraphs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::multiset::Multiset;

pub const MAX_VERTICES: usize = 64;

/// Dense vertex index. Indices follow the lexicographic order of labels.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(u8);

impl Vertex {
    /// Panics when `index >= MAX_VERTICES`.
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_VERTICES, "vertex index {index} out of range");
        Vertex(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub type VertexMultiset = Multiset<Vertex>;

/// A set of vertices as a 64-bit mask.
///
/// Sets are ordered by size first and then lexicographically by their sorted
/// vertex lists, which is the order used whenever collections of sets are
/// listed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1 << v.0)
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 >> v.0 & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1 << v.0;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1 << v.0);
    }

    pub fn with(self, v: Vertex) -> Self {
        VertexSet(self.0 | 1 << v.0)
    }

    pub fn without(self, v: Vertex) -> Self {
        VertexSet(self.0 & !(1 << v.0))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<Vertex> {
        (self.0 != 0).then(|| Vertex(self.0.trailing_zeros() as u8))
    }

    /// Vertices in increasing order.
    pub fn iter(self) -> VertexSetIter {
        VertexSetIter(self.0)
    }

    /// All subsets of `self`, starting from the empty set.
    pub fn subsets(self) -> impl Iterator<Item = VertexSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(VertexSet(cur))
        })
    }

    /// The multiset holding each vertex of the set once.
    pub fn to_multiset(self) -> VertexMultiset {
        self.iter().collect()
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = Vertex;
    type IntoIter = VertexSetIter;

    fn into_iter(self) -> VertexSetIter {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

#[derive(Clone, Debug)]
pub struct VertexSetIter(u64);

impl Iterator for VertexSetIter {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Vertex(v as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexSetIter {}

/// A finite simple directed graph: no loops, no parallel edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    labels: Vec<String>,
    out: Vec<VertexSet>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label != "->"
        && label != "--"
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '#' | ':' | '[' | ']'))
}

impl Digraph {
    /// Builds a graph from vertex labels and labelled edges.
    ///
    /// Vertices are indexed in lexicographic label order, so the result does
    /// not depend on the order of the input.
    pub fn from_labels<L, E, A, B>(labels: L, edges: E) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut sorted: Vec<String> = labels.into_iter().map(Into::into).collect();
        sorted.sort();
        if let Some(pair) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(pair[0].clone()));
        }
        if let Some(bad) = sorted.iter().find(|l| !valid_label(l)) {
            return Err(Error::InvalidLabel(bad.clone()));
        }
        if sorted.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(sorted.len()));
        }
        let mut g = Digraph { out: vec![VertexSet::EMPTY; sorted.len()], labels: sorted };
        for (a, b) in edges {
            let u = g.vertex(a.as_ref())?;
            let v = g.vertex(b.as_ref())?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// A graph on vertices labelled `1..=n` with 1-based edge endpoints.
    /// Labels are zero-padded when `n >= 10` so that label order matches
    /// numeric order.
    pub fn numbered(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let width = n.to_string().len();
        let labels = (1..=n).map(|i| format!("{i:0width$}"));
        let mut g = Digraph { labels: labels.collect(), out: vec![VertexSet::EMPTY; n] };
        for &(a, b) in edges {
            if a == 0 || a > n {
                return Err(Error::UnknownVertex(a.to_string()));
            }
            if b == 0 || b > n {
                return Err(Error::UnknownVertex(b.to_string()));
            }
            g.add_edge(Vertex::new(a - 1), Vertex::new(b - 1))?;
        }
        Ok(g)
    }

    /// Like [`Digraph::numbered`], with each pair giving both directions.
    pub fn numbered_undirected(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let both: Vec<_> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        Self::numbered(n, &both)
    }

    /// Numbered graph from out-neighbour masks; used by the generators.
    pub(crate) fn numbered_from_adjacency(out: Vec<VertexSet>) -> Self {
        let n = out.len();
        let width = n.to_string().len();
        let labels = (1..=n).map(|i| format!("{i:0width$}")).collect();
        debug_assert!(out
            .iter()
            .enumerate()
            .all(|(i, s)| !s.contains(Vertex::new(i)) && s.is_subset(VertexSet::full(n))));
        Digraph { labels, out }
    }

    pub(crate) fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(self.label(u).to_owned()));
        }
        if self.out[u.index()].contains(v) {
            return Err(Error::DuplicateEdge(self.label(u).to_owned(), self.label(v).to_owned()));
        }
        self.out[u.index()].insert(v);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.labels.len()).map(Vertex::new)
    }

    /// The whole vertex set `V`.
    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.labels.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v.index()]
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map(Vertex::new)
            .map_err(|_| Error::UnknownVertex(label.to_owned()))
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        labels.iter().map(|l| self.vertex(l.as_ref())).collect()
    }

    pub fn out_neighbors(&self, v: Vertex) -> VertexSet {
        self.out[v.index()]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.out[u.index()].contains(v)
    }

    /// All edges in lexicographic order of (tail, head).
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |v| (u, v)))
    }

    /// Errors with `UnknownVertex` when `s` mentions an index outside the graph.
    pub fn check_subset(&self, s: VertexSet) -> Result<()> {
        match s.difference(self.all()).first() {
            None => Ok(()),
            Some(v) => Err(Error::UnknownVertex(format!("#{}", v.index()))),
        }
    }

    /// Strongly connected components of the subgraph induced on `subset`,
    /// sorted by minimal vertex.
    pub fn strongly_connected_components(&self, subset: VertexSet) -> Result<Vec<VertexSet>> {
        self.check_subset(subset)?;
        Ok(self.sccs(subset))
    }

    pub fn is_strongly_connected(&self, subset: VertexSet) -> Result<bool> {
        self.check_subset(subset)?;
        Ok(self.is_sc(subset))
    }

    pub(crate) fn is_sc(&self, subset: VertexSet) -> bool {
        match subset.first() {
            None => true,
            Some(v) => self.reach(v, subset) == subset && self.coreach(v, subset) == subset,
        }
    }

    /// Vertices reachable from `v` inside `within`.
    pub(crate) fn reach(&self, v: Vertex, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for u in frontier {
                next = next.union(self.out[u.index()]);
            }
            frontier = next.intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    fn coreach(&self, v: Vertex, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        loop {
            let grown: VertexSet = within
                .difference(seen)
                .iter()
                .filter(|&u| !self.out[u.index()].is_disjoint(seen))
                .collect();
            if grown.is_empty() {
                return seen;
            }
            seen = seen.union(grown);
        }
    }

    /// Tarjan's algorithm restricted to `subset`; indices outside the graph
    /// must already have been rejected.
    pub(crate) fn sccs(&self, subset: VertexSet) -> Vec<VertexSet> {
        struct State<'a> {
            g: &'a Digraph,
            subset: VertexSet,
            index: [u32; MAX_VERTICES],
            low: [u32; MAX_VERTICES],
            visited: VertexSet,
            on_stack: VertexSet,
            stack: Vec<Vertex>,
            counter: u32,
            out: Vec<VertexSet>,
        }

        fn connect(st: &mut State<'_>, v: Vertex) {
            let i = v.index();
            st.index[i] = st.counter;
            st.low[i] = st.counter;
            st.counter += 1;
            st.visited.insert(v);
            st.stack.push(v);
            st.on_stack.insert(v);
            for w in st.g.out[i].intersection(st.subset) {
                if !st.visited.contains(w) {
                    connect(st, w);
                    st.low[i] = st.low[i].min(st.low[w.index()]);
                } else if st.on_stack.contains(w) {
                    st.low[i] = st.low[i].min(st.index[w.index()]);
                }
            }
            if st.low[i] == st.index[i] {
                let mut comp = VertexSet::EMPTY;
                loop {
                    let w = st.stack.pop().expect("tarjan stack underflow");
                    st.on_stack.remove(w);
                    comp.insert(w);
                    if w == v {
                        break;
                    }
                }
                st.out.push(comp);
            }
        }

        let mut st = State {
            g: self,
            subset,
            index: [0; MAX_VERTICES],
            low: [0; MAX_VERTICES],
            visited: VertexSet::EMPTY,
            on_stack: VertexSet::EMPTY,
            stack: Vec::new(),
            counter: 0,
            out: Vec::new(),
        };
        for v in subset {
            if !st.visited.contains(v) {
                connect(&mut st, v);
            }
        }
        let mut out = st.out;
        out.sort_by_key(|c| c.first());
        out
    }

    /// Weak connectivity of the whole graph.
    pub fn is_weakly_connected(&self) -> bool {
        let Some(start) = self.all().first() else {
            return true;
        };
        let mut undirected = self.out.clone();
        for (u, v) in self.edges() {
            undirected[v.index()].insert(u);
        }
        let sym = Digraph { labels: self.labels.clone(), out: undirected };
        sym.reach(start, self.all()) == self.all()
    }

    /// Whether the graph is a tree drawn with both edge directions: weakly
    /// connected, `2(|V| - 1)` edges, every edge paired with its reverse.
    pub fn is_bidirected_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0
            && self.edge_count() == 2 * (n - 1)
            && self.edges().all(|(u, v)| self.has_edge(v, u))
            && self.is_weakly_connected()
    }

    pub fn fmt_vertex(&self, v: Vertex) -> &str {
        self.label(v)
    }

    /// `{a,b,c}` using vertex labels.
    pub fn fmt_set(&self, s: VertexSet) -> String {
        let inner: Vec<&str> = s.iter().map(|v| self.label(v)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// `[a,a,b]` using vertex labels.
    pub fn fmt_multiset(&self, m: &VertexMultiset) -> String {
        let inner: Vec<&str> = m.iter_repeated().map(|&v| self.label(v)).collect();
        format!("[{}]", inner.join(","))
    }

    /// Canonical text form, accepted back by [`crate::io::parse_graph`].
    pub fn to_text(&self) -> String {
        let mut s = format!("vertices: {}\n", self.labels.join(" "));
        for (u, v) in self.edges() {
            s.push_str(&format!("{} -> {}\n", self.label(u), self.label(v)));
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`Digraph::to_text`].
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Edge list keyed by tail label, handy for reports.
    pub fn adjacency_labels(&self) -> BTreeMap<String, BTreeSet<String>> {
        self.vertices()
            .map(|u| {
                let heads = self.out_neighbors(u).iter().map(|v| self.label(v).to_owned());
                (self.label(u).to_owned(), heads.collect())
            })
            .collect()
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(u, v)| format!("{}{}", self.label(u), self.label(v)))
            .collect();
        f.debug_struct("Digraph")
            .field("vertices", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}
