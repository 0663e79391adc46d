//! Nested collections, the correspondence between vertex multisets and nested
//! multicollections, clusters, and cluster-monomial indices.
//!
//! A family of vertex sets is *nested* when
//!
//! * any two members are nested or disjoint, and
//! * whenever some members are pairwise disjoint, each of them is a
//!   strongly connected component of the subgraph induced on their union.
//!
//! A multiset of sets is a nested multicollection when its support is nested.
//! Summing the members of a nested multicollection gives a vertex multiset,
//! and every vertex multiset arises from exactly one nested multicollection:
//! take the strongly connected components of each layer `T⟨i⟩`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexMultiset, VertexSet};
use crate::multiset::Multiset;

/// How the condition on disjoint members is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DisjointCheck {
    /// Only the sibling groups of the laminar forest: for each member, its
    /// maximal proper sub-members, plus the top-level members.
    #[default]
    Siblings,
    /// Every antichain of pairwise-disjoint members. Exponential.
    Exhaustive,
}

fn check_members<'a>(g: &Digraph, sets: impl IntoIterator<Item = &'a VertexSet>) -> Result<()> {
    sets.into_iter().try_for_each(|&s| g.check_subset(s))
}

/// The support of a multiset of sets, without the empty set.
fn support(members: &Multiset<VertexSet>) -> Vec<VertexSet> {
    members.iter().map(|(&s, _)| s).filter(|s| !s.is_empty()).collect()
}

fn laminar(sets: &[VertexSet]) -> bool {
    sets.iter().enumerate().all(|(i, &a)| {
        sets[i + 1..]
            .iter()
            .all(|&b| a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b))
    })
}

/// Each of `group` is a strongly connected component of their union.
fn components_of_union(g: &Digraph, group: &[VertexSet]) -> bool {
    let union = group.iter().fold(VertexSet::EMPTY, |acc, &s| acc.union(s));
    let comps = g.sccs(union);
    group.iter().all(|s| comps.contains(s))
}

/// Sibling groups of a laminar family: the maximal members, and for each
/// member the maximal members strictly inside it.
fn sibling_groups(sets: &[VertexSet]) -> Vec<Vec<VertexSet>> {
    let maximal_within = |parent: Option<VertexSet>| -> Vec<VertexSet> {
        let inside: Vec<VertexSet> = sets
            .iter()
            .copied()
            .filter(|&s| parent.is_none_or(|p| s != p && s.is_subset(p)))
            .collect();
        inside
            .iter()
            .copied()
            .filter(|&s| !inside.iter().any(|&t| t != s && s.is_subset(t)))
            .collect()
    };
    std::iter::once(None)
        .chain(sets.iter().copied().map(Some))
        .map(maximal_within)
        .filter(|grp| !grp.is_empty())
        .collect()
}

fn disjoint_exhaustive(g: &Digraph, sets: &[VertexSet]) -> bool {
    fn go(g: &Digraph, sets: &[VertexSet], from: usize, chosen: &mut Vec<VertexSet>, used: VertexSet) -> bool {
        if !chosen.is_empty() && !components_of_union(g, chosen) {
            return false;
        }
        for i in from..sets.len() {
            if sets[i].is_disjoint(used) {
                chosen.push(sets[i]);
                let ok = go(g, sets, i + 1, chosen, used.union(sets[i]));
                chosen.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    go(g, sets, 0, &mut Vec::new(), VertexSet::EMPTY)
}

/// Whether `members` (a multiset of vertex sets) is a nested
/// multicollection, checking disjoint members through sibling groups.
pub fn is_nested(g: &Digraph, members: &Multiset<VertexSet>) -> Result<bool> {
    is_nested_with(g, members, DisjointCheck::Siblings)
}

pub fn is_nested_with(g: &Digraph, members: &Multiset<VertexSet>, mode: DisjointCheck) -> Result<bool> {
    check_members(g, members.iter().map(|(s, _)| s))?;
    Ok(support_is_nested(g, &support(members), mode))
}

pub(crate) fn support_is_nested(g: &Digraph, sets: &[VertexSet], mode: DisjointCheck) -> bool {
    if !laminar(sets) {
        return false;
    }
    match mode {
        DisjointCheck::Siblings => sibling_groups(sets).iter().all(|grp| components_of_union(g, grp)),
        DisjointCheck::Exhaustive => disjoint_exhaustive(g, sets),
    }
}

/// A multiset of nonempty vertex sets whose support is nested.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct NestedMulticollection {
    members: Multiset<VertexSet>,
}

impl NestedMulticollection {
    /// Validates `members`; empty sets are dropped.
    pub fn new(g: &Digraph, mut members: Multiset<VertexSet>) -> Result<Self> {
        members.retain(|s| !s.is_empty());
        if !is_nested(g, &members)? {
            return Err(Error::Precondition("members do not form a nested collection".into()));
        }
        Ok(NestedMulticollection { members })
    }

    pub fn members(&self) -> &Multiset<VertexSet> {
        &self.members
    }

    pub fn into_members(self) -> Multiset<VertexSet> {
        self.members
    }

    /// Members with repetition, sorted by size then lexicographically.
    pub fn render(&self, g: &Digraph) -> String {
        let inner: Vec<String> = self.members.iter_repeated().map(|&s| g.fmt_set(s)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// The nested multicollection summing to `t`: the strongly connected
/// components of every layer `t⟨i⟩`.
pub fn multiset_to_nested(g: &Digraph, t: &VertexMultiset) -> Result<NestedMulticollection> {
    let support: VertexSet = t.iter().map(|(&v, _)| v).collect();
    g.check_subset(support)?;
    let mut members = Multiset::new();
    for layer in t.layers() {
        members.extend(g.sccs(layer.into_iter().collect()));
    }
    Ok(NestedMulticollection { members })
}

/// The multiset sum of the members.
pub fn nested_to_multiset(n: &NestedMulticollection) -> VertexMultiset {
    let mut t = VertexMultiset::new();
    for (s, &k) in n.members.iter() {
        for v in *s {
            t.insert_many(v, k);
        }
    }
    t
}

/// Nonempty strongly connected subsets of `w`, in set order.
fn strongly_connected_subsets(g: &Digraph, w: VertexSet) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = w.subsets().filter(|&s| !s.is_empty() && g.is_sc(s)).collect();
    out.sort();
    out
}

fn is_maximal(g: &Digraph, candidates: &[VertexSet], family: &BTreeSet<VertexSet>) -> bool {
    candidates.iter().filter(|s| !family.contains(s)).all(|&s| {
        let mut grown: Vec<VertexSet> = family.iter().copied().collect();
        grown.push(s);
        !support_is_nested(g, &grown, DisjointCheck::Siblings)
    })
}

/// All nested collections (sets, no multiplicities) on `w`, found through
/// the multiset correspondence: every nested collection is the image of the
/// multiset of its member sum, so it suffices to walk the multisets with
/// support inside `w` and multiplicities at most `|w|`, keeping images
/// without repeated members.
pub fn nested_collections_via_multisets(g: &Digraph, w: VertexSet) -> Result<Vec<BTreeSet<VertexSet>>> {
    g.check_subset(w)?;
    let verts: Vec<_> = w.iter().collect();
    let cap = verts.len() as u32;
    let mut out = Vec::new();
    let mut mult = vec![0u32; verts.len()];
    loop {
        let t: VertexMultiset = verts
            .iter()
            .zip(&mult)
            .flat_map(|(&v, &k)| std::iter::repeat_n(v, k as usize))
            .collect();
        let n = multiset_to_nested(g, &t)?;
        if n.members.max_multiplicity() <= 1 {
            out.push(n.members.support());
        }
        // Odometer over multiplicity vectors.
        let mut i = 0;
        loop {
            if i == mult.len() {
                out.sort();
                return Ok(out);
            }
            if mult[i] < cap {
                mult[i] += 1;
                break;
            }
            mult[i] = 0;
            i += 1;
        }
    }
}

/// All nested collections on `w` by direct search over families of
/// strongly connected subsets.
pub fn nested_collections_by_search(g: &Digraph, w: VertexSet) -> Result<Vec<BTreeSet<VertexSet>>> {
    g.check_subset(w)?;
    let candidates = strongly_connected_subsets(g, w);
    fn go(g: &Digraph, cands: &[VertexSet], from: usize, chosen: &mut Vec<VertexSet>, out: &mut Vec<BTreeSet<VertexSet>>) {
        out.push(chosen.iter().copied().collect());
        for i in from..cands.len() {
            chosen.push(cands[i]);
            if support_is_nested(g, chosen, DisjointCheck::Siblings) {
                go(g, cands, i + 1, chosen, out);
            }
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    go(g, &candidates, 0, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// Maximal nested collections on `w`, in canonical order.
pub fn enumerate_maximal_nested_collections(g: &Digraph, w: VertexSet) -> Result<Vec<BTreeSet<VertexSet>>> {
    let all = nested_collections_via_multisets(g, w)?;
    let candidates = strongly_connected_subsets(g, w);
    Ok(all.into_iter().filter(|f| is_maximal(g, &candidates, f)).collect())
}

/// `{X_v : v ∈ U} ∪ {Y_I : I ∈ N}` for a set `U` and a maximal nested
/// collection `N` on `V ∖ U`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cluster {
    pub x_vertices: VertexSet,
    pub nested: BTreeSet<VertexSet>,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.x_vertices.len() + self.nested.len()
    }

    pub fn render(&self, g: &Digraph) -> String {
        let n: Vec<String> = self.nested.iter().map(|&s| g.fmt_set(s)).collect();
        format!("U={} N={{{}}}", g.fmt_set(self.x_vertices), n.join(","))
    }
}

/// Every cluster of the graph: `U` ranges over subsets of `V` (in set order)
/// and `N` over the maximal nested collections on `V ∖ U`.
pub fn enumerate_clusters(g: &Digraph) -> Result<Vec<Cluster>> {
    let mut us: Vec<VertexSet> = g.all().subsets().collect();
    us.sort();
    let mut out = Vec::new();
    for u in us {
        for nested in enumerate_maximal_nested_collections(g, g.all().difference(u))? {
            out.push(Cluster { x_vertices: u, nested });
        }
    }
    Ok(out)
}

/// A general monomial `π(U, S) = ∏_{v∈U} X_v ∏_{I∈S} Y_I`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MonomialIndex {
    pub u: VertexMultiset,
    pub s: Multiset<VertexSet>,
}

impl MonomialIndex {
    /// Empty sets in `s` are dropped (`Y_∅ = 1`).
    pub fn new(u: VertexMultiset, mut s: Multiset<VertexSet>) -> Self {
        s.retain(|x| !x.is_empty());
        MonomialIndex { u, s }
    }

    /// Number of vertices in `S`, counted with multiplicity.
    pub fn s_weight(&self) -> usize {
        self.s.iter().map(|(x, &k)| x.len() * k as usize).sum()
    }

    pub fn render(&self, g: &Digraph) -> String {
        render_monomial(g, &self.u, self.s.iter_repeated().copied())
    }
}

/// A cluster monomial indexed by disjoint vertex multisets `(U, T)`: the
/// product of `X_U` and `Y_I` over the nested multicollection summing to `T`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ClusterMonomialIndex {
    u: VertexMultiset,
    t: VertexMultiset,
}

impl ClusterMonomialIndex {
    pub fn new(u: VertexMultiset, t: VertexMultiset) -> Result<Self> {
        if !u.is_disjoint(&t) {
            return Err(Error::Precondition("U and T of a cluster monomial must be disjoint".into()));
        }
        Ok(ClusterMonomialIndex { u, t })
    }

    pub fn u(&self) -> &VertexMultiset {
        &self.u
    }

    pub fn t(&self) -> &VertexMultiset {
        &self.t
    }

    /// `|U| - |T|`, the grading used to order indices.
    pub fn degree(&self) -> i64 {
        self.u.len() as i64 - self.t.len() as i64
    }

    /// The same `Y`-part with `U` replaced.
    pub(crate) fn with_u(&self, u: VertexMultiset) -> Result<Self> {
        Self::new(u, self.t.clone())
    }

    /// Renders as `X_a·X_b·Y_{..}·Y_{..}` (or `1`), using the nested
    /// multicollection of `T`.
    pub fn render(&self, g: &Digraph) -> String {
        let nested = multiset_to_nested(g, &self.t).expect("index vertices belong to the graph");
        render_monomial(g, &self.u, nested.members.iter_repeated().copied())
    }
}

fn render_monomial(g: &Digraph, u: &VertexMultiset, sets: impl Iterator<Item = VertexSet>) -> String {
    let mut factors: Vec<String> = u
        .iter()
        .map(|(&v, &k)| {
            if k == 1 {
                format!("X_{}", g.label(v))
            } else {
                format!("X_{}^{k}", g.label(v))
            }
        })
        .collect();
    let mut ys: Vec<VertexSet> = sets.collect();
    ys.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut i = 0;
    while i < ys.len() {
        let k = ys[i..].iter().take_while(|&&s| s == ys[i]).count();
        let inner: Vec<&str> = ys[i].iter().map(|v| g.label(v)).collect();
        let power = if k == 1 { String::new() } else { format!("^{k}") };
        factors.push(format!("Y_{{{}}}{power}", inner.join(",")));
        i += k;
    }
    if factors.is_empty() {
        "1".to_owned()
    } else {
        factors.join("·")
    }
}

/// Outcome of [`canonical_cluster_index`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClusterStatus {
    Cluster(ClusterMonomialIndex),
    NotClusterMonomial,
}

/// The `(U, T)` index of `π(U, S)` when `S` is a nested multicollection on
/// `V ∖ U⟨1⟩`.
pub fn canonical_cluster_index(g: &Digraph, m: &MonomialIndex) -> Result<ClusterStatus> {
    let u_support: VertexSet = m.u.iter().map(|(&v, _)| v).collect();
    g.check_subset(u_support)?;
    let sets = support(&m.s);
    check_members(g, &sets)?;
    if sets.iter().any(|s| !s.is_disjoint(u_support)) || !support_is_nested(g, &sets, DisjointCheck::Siblings) {
        return Ok(ClusterStatus::NotClusterMonomial);
    }
    let t = nested_to_multiset(&NestedMulticollection { members: m.s.clone() });
    Ok(ClusterStatus::Cluster(ClusterMonomialIndex::new(m.u.clone(), t)?))
}
