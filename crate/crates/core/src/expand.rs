//! Expansion of monomials into cluster monomials.
//!
//! Three constructive procedures live here:
//!
//! * the exchange relation rewriting `X_v·Y_I` as a sum over paths leaving `v`
//!   ([`exchange_xy`]);
//! * the expansion of an arbitrary `Y`-monomial as an integer combination of
//!   cluster `Y`-monomials ([`y_span_expand`]), and of an arbitrary monomial
//!   as an `R`-combination of cluster monomials ([`span_expand`]);
//! * the Ptolemy-type product formula for `Y_I·Y_J` on trees
//!   ([`tree_ptolemy_expand`]).
//!
//! Every output can be re-expanded into a Laurent polynomial with
//! [`ClusterCombination::to_laurent`] and compared with the input.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex, VertexMultiset, VertexSet};
use crate::laurent::{CoefPoly, LaurentPoly};
use crate::lp::{enumerate_cycle_families, LpAlgebra};
use crate::multiset::Multiset;
use crate::nested::{multiset_to_nested, ClusterMonomialIndex, MonomialIndex};

/// A finite `R`-linear combination of cluster monomials.
///
/// Terms are kept in index order and merged eagerly; a coefficient that
/// cancels to zero removes its term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClusterCombination {
    nvars: usize,
    terms: BTreeMap<ClusterMonomialIndex, CoefPoly>,
}

impl ClusterCombination {
    pub fn zero(nvars: usize) -> Self {
        ClusterCombination { nvars, terms: BTreeMap::new() }
    }

    /// The single term `1·π(index)`.
    pub fn single(nvars: usize, index: ClusterMonomialIndex) -> Self {
        let mut c = Self::zero(nvars);
        c.terms.insert(index, CoefPoly::one(nvars));
        c
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClusterMonomialIndex, &CoefPoly)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, index: &ClusterMonomialIndex) -> CoefPoly {
        self.terms.get(index).cloned().unwrap_or_else(|| CoefPoly::zero(self.nvars))
    }

    pub fn add_term(&mut self, index: ClusterMonomialIndex, coef: &CoefPoly) -> Result<()> {
        if coef.nvars() != self.nvars {
            return Err(Error::UniverseMismatch(self.nvars, coef.nvars()));
        }
        if coef.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&index) {
            Some(c) => {
                *c = c.try_add(coef)?;
                if c.is_zero() {
                    self.terms.remove(&index);
                }
            }
            None => {
                self.terms.insert(index, coef.clone());
            }
        }
        Ok(())
    }

    /// `self += scale·other`.
    pub fn add_scaled(&mut self, other: &Self, scale: &CoefPoly) -> Result<()> {
        for (idx, c) in &other.terms {
            self.add_term(idx.clone(), &c.try_mul(scale)?)?;
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &CoefPoly::one(self.nvars))?;
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &CoefPoly::constant(self.nvars, -1))?;
        Ok(out)
    }

    /// Whether every coefficient is a constant integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }

    /// Whether every coefficient has nonnegative integer coefficients.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(CoefPoly::is_nonnegative)
    }

    /// Every vertex occurring in any index.
    pub fn vertex_support(&self) -> VertexSet {
        self.terms
            .keys()
            .flat_map(|idx| idx.u().iter().chain(idx.t().iter()).map(|(&v, _)| v))
            .collect()
    }

    /// Re-expands into a Laurent polynomial.
    pub fn to_laurent(&self, oracle: &Oracle) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.nvars);
        for (idx, c) in &self.terms {
            acc = acc.try_add(&oracle.cluster_monomial(idx)?.try_scale(c)?)?;
        }
        Ok(acc)
    }

    /// Terms in index order, for serialization.
    pub fn records(&self, g: &Digraph) -> Vec<TermRecord> {
        let labels = g.labels();
        self.terms
            .iter()
            .map(|(idx, c)| TermRecord {
                coefficient: c.render(labels),
                u: idx.u().iter_repeated().map(|&v| g.label(v).to_owned()).collect(),
                t: idx.t().iter_repeated().map(|&v| g.label(v).to_owned()).collect(),
                monomial: idx.render(g),
            })
            .collect()
    }

    /// One term per line, in index order; `0` for the empty combination.
    pub fn render(&self, g: &Digraph) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        let labels = g.labels();
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let coef = c.render(labels);
                let mono = idx.render(g);
                match (coef.as_str(), mono.as_str()) {
                    (_, "1") => coef,
                    ("1", _) => mono,
                    ("-1", _) => format!("-{mono}"),
                    _ if c.terms().count() > 1 => format!("({coef})·{mono}"),
                    _ => format!("{coef}·{mono}"),
                }
            })
            .collect();
        lines.join("\n")
    }
}

/// One serialized term of a [`ClusterCombination`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TermRecord {
    pub coefficient: String,
    pub u: Vec<String>,
    pub t: Vec<String>,
    pub monomial: String,
}

/// Laurent re-expansion with a cache of cluster-monomial polynomials.
#[derive(Debug)]
pub struct Oracle {
    alg: LpAlgebra,
    cache: RwLock<HashMap<ClusterMonomialIndex, Arc<LaurentPoly>>>,
}

impl Oracle {
    pub fn new(g: Digraph) -> Self {
        Oracle { alg: LpAlgebra::new(g), cache: RwLock::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &LpAlgebra {
        &self.alg
    }

    pub fn graph(&self) -> &Digraph {
        self.alg.graph()
    }

    /// `X_U · ∏ Y_J` over the nested multicollection summing to `T`.
    pub fn cluster_monomial(&self, idx: &ClusterMonomialIndex) -> Result<Arc<LaurentPoly>> {
        if let Some(p) = self.cache.read().unwrap().get(idx) {
            return Ok(Arc::clone(p));
        }
        let nested = multiset_to_nested(self.alg.graph(), idx.t())?;
        let p = Arc::new(self.alg.monomial(idx.u(), nested.members())?);
        Ok(Arc::clone(self.cache.write().unwrap().entry(idx.clone()).or_insert(p)))
    }

    /// `π(U, S)` for a general monomial.
    pub fn monomial(&self, m: &MonomialIndex) -> Result<LaurentPoly> {
        self.alg.monomial(&m.u, &m.s)
    }
}

/// A directed path `v_1, …, v_k` with distinct vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IPath(Vec<Vertex>);

impl IPath {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn last(&self) -> Vertex {
        *self.0.last().expect("paths are nonempty")
    }

    pub fn render(&self, g: &Digraph) -> String {
        let labels: Vec<&str> = self.0.iter().map(|&v| g.label(v)).collect();
        format!("({})", labels.join(","))
    }
}

/// Where an exchange path stops relative to `I`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Endpoint {
    /// The path ends at `w ∈ I`; the term carries the coefficient `A_w`.
    Inside(Vertex),
    /// The path leaves `I` at its last step, to `w ∉ I`; the term carries
    /// the factor `X_w`.
    Outside(Vertex),
}

/// One term of the exchange relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExchangeTerm {
    pub path: IPath,
    pub end: Endpoint,
    /// `I ∖ p`.
    pub residual: VertexSet,
}

fn require_member(g: &Digraph, v: Vertex, set: VertexSet) -> Result<()> {
    g.check_subset(set)?;
    if !set.contains(v) {
        return Err(Error::Precondition(format!(
            "vertex {} is not in {}",
            g.fmt_vertex(v),
            g.fmt_set(set)
        )));
    }
    Ok(())
}

/// Every path starting at `v` whose vertices lie in `I`, except possibly the
/// last, which may leave `I`. Includes the one-vertex path `(v)`.
///
/// Depth-first, neighbors in vertex order, each path emitted before its
/// extensions.
pub fn enumerate_exchange_paths(g: &Digraph, v: Vertex, set: VertexSet) -> Result<Vec<(IPath, Endpoint)>> {
    require_member(g, v, set)?;
    fn go(g: &Digraph, set: VertexSet, path: &mut Vec<Vertex>, used: VertexSet, out: &mut Vec<(IPath, Endpoint)>) {
        let last = *path.last().unwrap();
        out.push((IPath(path.clone()), Endpoint::Inside(last)));
        for w in g.out_neighbors(last) {
            if !set.contains(w) {
                path.push(w);
                out.push((IPath(path.clone()), Endpoint::Outside(w)));
                path.pop();
            } else if !used.contains(w) {
                path.push(w);
                go(g, set, path, used.with(w), out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, set, &mut vec![v], VertexSet::singleton(v), &mut out);
    Ok(out)
}

/// The right-hand side of
/// `X_v·Y_I = Σ_{p ends at w∈I} A_w·Y_{I∖p} + Σ_{p leaves I at w} X_w·Y_{I∖p}`.
pub fn exchange_xy(g: &Digraph, v: Vertex, set: VertexSet) -> Result<Vec<ExchangeTerm>> {
    Ok(enumerate_exchange_paths(g, v, set)?
        .into_iter()
        .map(|(path, end)| {
            let residual = set.difference(path.vertex_set());
            ExchangeTerm { path, end, residual }
        })
        .collect())
}

/// Re-expands the right-hand side of [`exchange_xy`].
pub fn exchange_to_laurent(alg: &LpAlgebra, terms: &[ExchangeTerm]) -> Result<LaurentPoly> {
    let n = alg.nvars();
    let mut acc = LaurentPoly::zero(n);
    for t in terms {
        let factor = match t.end {
            Endpoint::Inside(w) => LaurentPoly::a(n, w),
            Endpoint::Outside(w) => LaurentPoly::x(n, w),
        };
        acc = acc.try_add(&factor.try_mul(&*alg.y(t.residual)?)?)?;
    }
    Ok(acc)
}

fn vertex_count(s: &Multiset<VertexSet>) -> usize {
    s.iter().map(|(x, &k)| x.len() * k as usize).sum()
}

fn without_empties(mut s: Multiset<VertexSet>) -> Multiset<VertexSet> {
    s.retain(|x| !x.is_empty());
    s
}

/// Set-multiset sum and its layer multiset `{T⟨1⟩, T⟨2⟩, …}`.
fn layers_of(s: &Multiset<VertexSet>) -> (VertexMultiset, Multiset<VertexSet>) {
    let mut t = VertexMultiset::new();
    for (x, &k) in s.iter() {
        for v in *x {
            t.insert_many(v, k);
        }
    }
    let layers = t.layers().into_iter().map(|l| l.into_iter().collect()).collect();
    (t, layers)
}

/// Expansion engine for one graph, memoizing subresults.
///
/// Not shared across threads; give each worker its own.
#[derive(Debug)]
pub struct Expander<'g> {
    g: &'g Digraph,
    residuals: HashMap<VertexSet, Arc<Vec<VertexSet>>>,
    y_memo: HashMap<Multiset<VertexSet>, Arc<ClusterCombination>>,
    memo: HashMap<(VertexMultiset, Multiset<VertexSet>), Arc<ClusterCombination>>,
}

impl<'g> Expander<'g> {
    pub fn new(g: &'g Digraph) -> Self {
        Expander { g, residuals: HashMap::new(), y_memo: HashMap::new(), memo: HashMap::new() }
    }

    pub fn graph(&self) -> &'g Digraph {
        self.g
    }

    fn nvars(&self) -> usize {
        self.g.vertex_count()
    }

    /// `S ∖ C` for every cycle family `C` of `S`, empty family first.
    fn cycle_residuals(&mut self, s: VertexSet) -> Result<Arc<Vec<VertexSet>>> {
        if let Some(r) = self.residuals.get(&s) {
            return Ok(Arc::clone(r));
        }
        let r: Vec<VertexSet> = enumerate_cycle_families(self.g, s)?
            .iter()
            .map(|c| s.difference(c.vertex_set()))
            .collect();
        let r = Arc::new(r);
        self.residuals.insert(s, Arc::clone(&r));
        Ok(r)
    }

    /// Every way of replacing each member `S_i` (listed with repetition) by
    /// some `S_i ∖ C_i`, together with whether all `C_i` were empty.
    fn cycle_choices(&mut self, members: &[VertexSet]) -> Result<Vec<(Multiset<VertexSet>, bool)>> {
        let options: Vec<Arc<Vec<VertexSet>>> =
            members.iter().map(|&s| self.cycle_residuals(s)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut pick = vec![0usize; members.len()];
        loop {
            let chosen: Multiset<VertexSet> = pick.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            out.push((without_empties(chosen), pick.iter().all(|&i| i == 0)));
            let mut k = 0;
            loop {
                if k == pick.len() {
                    return Ok(out);
                }
                pick[k] += 1;
                if pick[k] < options[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }

    /// Integer combination of cluster `Y`-monomials equal to `∏_{I∈S} Y_I`.
    pub fn y_span(&mut self, s: &Multiset<VertexSet>) -> Result<Arc<ClusterCombination>> {
        for (&x, _) in s.iter() {
            self.g.check_subset(x)?;
        }
        self.y_span_rec(without_empties(s.clone()))
    }

    fn y_span_rec(&mut self, s: Multiset<VertexSet>) -> Result<Arc<ClusterCombination>> {
        if let Some(c) = self.y_memo.get(&s) {
            return Ok(Arc::clone(c));
        }
        let n = self.nvars();
        let (t, layers) = layers_of(&s);
        let base = ClusterMonomialIndex::new(VertexMultiset::new(), t)?;
        let result = if layers == s {
            ClusterCombination::single(n, base)
        } else {
            // ∏_S Σ_C Y_{S∖C} = ∏_𝒯 Σ_C Y_{𝒯∖C}; solve for the all-empty
            // choice on the left. The all-empty choice on the right is the
            // layered monomial itself, a cluster monomial.
            let size = vertex_count(&s);
            let mut acc = ClusterCombination::single(n, base);
            let one = CoefPoly::one(n);
            let minus_one = CoefPoly::constant(n, -1);
            let layer_list: Vec<VertexSet> = layers.iter_repeated().copied().collect();
            for (next, all_empty) in self.cycle_choices(&layer_list)? {
                if !all_empty {
                    let sub = self.y_span_step(size, next)?;
                    acc.add_scaled(&sub, &one)?;
                }
            }
            let members: Vec<VertexSet> = s.iter_repeated().copied().collect();
            for (next, all_empty) in self.cycle_choices(&members)? {
                if !all_empty {
                    let sub = self.y_span_step(size, next)?;
                    acc.add_scaled(&sub, &minus_one)?;
                }
            }
            acc
        };
        let result = Arc::new(result);
        self.y_memo.insert(s, Arc::clone(&result));
        Ok(result)
    }

    fn y_span_step(&mut self, size: usize, next: Multiset<VertexSet>) -> Result<Arc<ClusterCombination>> {
        let next_size = vertex_count(&next);
        if next_size >= size {
            return Err(Error::NonTermination(format!(
                "Y-monomial expansion did not shrink ({size} -> {next_size} vertices)"
            )));
        }
        self.y_span_rec(next)
    }

    /// `R`-combination of cluster monomials equal to `π(U, S)`.
    pub fn span(&mut self, m: &MonomialIndex) -> Result<Arc<ClusterCombination>> {
        let u_support: VertexSet = m.u.iter().map(|(&v, _)| v).collect();
        self.g.check_subset(u_support)?;
        for (&x, _) in m.s.iter() {
            self.g.check_subset(x)?;
        }
        self.span_rec(m.u.clone(), without_empties(m.s.clone()))
    }

    fn span_rec(&mut self, u: VertexMultiset, s: Multiset<VertexSet>) -> Result<Arc<ClusterCombination>> {
        let key = (u, s);
        if let Some(c) = self.memo.get(&key) {
            return Ok(Arc::clone(c));
        }
        let (u, s) = &key;
        let n = self.nvars();
        // Minimal v ∈ U lying in a member, then the minimal such member.
        let pivot = u
            .iter()
            .find_map(|(&v, _)| s.iter().map(|(&x, _)| x).filter(|x| x.contains(v)).min().map(|x| (v, x)));
        let result = match pivot {
            None => {
                let ys = self.y_span_rec(s.clone())?;
                let mut out = ClusterCombination::zero(n);
                for (idx, c) in ys.iter() {
                    let mut full = u.clone();
                    full.extend(idx.u().iter_repeated().copied());
                    out.add_term(idx.with_u(full)?, c)?;
                }
                out
            }
            Some((v, member)) => {
                let size = vertex_count(s);
                let mut rest = s.clone();
                rest.remove_one(&member);
                let mut u_rest = u.clone();
                u_rest.remove_one(&v);
                let mut out = ClusterCombination::zero(n);
                for term in exchange_xy(self.g, v, member)? {
                    let mut next_s = rest.clone();
                    if !term.residual.is_empty() {
                        next_s.insert(term.residual);
                    }
                    let next_size = vertex_count(&next_s);
                    if next_size >= size {
                        return Err(Error::NonTermination(format!(
                            "monomial expansion did not shrink ({size} -> {next_size} vertices)"
                        )));
                    }
                    let (next_u, coef) = match term.end {
                        Endpoint::Inside(w) => (u_rest.clone(), CoefPoly::a(n, w)),
                        Endpoint::Outside(w) => {
                            let mut nu = u_rest.clone();
                            nu.insert(w);
                            (nu, CoefPoly::one(n))
                        }
                    };
                    let sub = self.span_rec(next_u, next_s)?;
                    out.add_scaled(&sub, &coef)?;
                }
                out
            }
        };
        let result = Arc::new(result);
        self.memo.insert(key, Arc::clone(&result));
        Ok(result)
    }
}

/// Integer combination of cluster `Y`-monomials equal to `∏_{I∈S} Y_I`.
///
/// Every vertex occurring in the output occurs in `S`.
pub fn y_span_expand(g: &Digraph, s: &Multiset<VertexSet>) -> Result<ClusterCombination> {
    Ok((*Expander::new(g).y_span(s)?).clone())
}

/// Combination of cluster monomials, with coefficients in `Z[A_v]`, equal
/// to `π(U, S) = ∏_{v∈U} X_v ∏_{I∈S} Y_I`.
pub fn span_expand(g: &Digraph, m: &MonomialIndex) -> Result<ClusterCombination> {
    Ok((*Expander::new(g).span(m)?).clone())
}

/// The unique tree path from `a` to `b`.
fn tree_path(g: &Digraph, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let mut parent = vec![None; g.vertex_count()];
    let mut stack = vec![a];
    let mut seen = VertexSet::singleton(a);
    while let Some(x) = stack.pop() {
        for y in g.out_neighbors(x) {
            if !seen.contains(y) {
                seen.insert(y);
                parent[y.index()] = Some(x);
                stack.push(y);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while let Some(p) = parent[cur.index()] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

fn require_tree(g: &Digraph, i: VertexSet, j: VertexSet) -> Result<()> {
    g.check_subset(i)?;
    g.check_subset(j)?;
    if !g.is_bidirected_tree() {
        return Err(Error::NotATree);
    }
    Ok(())
}

/// Families of pairwise vertex-disjoint paths from `I` to `J` in a tree:
/// each path starts in `I ∖ J`, ends in `J ∖ I`, and has every other vertex
/// in `I ∩ J`. The empty family comes first.
pub fn tree_path_families(g: &Digraph, i: VertexSet, j: VertexSet) -> Result<Vec<Vec<IPath>>> {
    require_tree(g, i, j)?;
    let both = i.intersection(j);
    let mut paths = Vec::new();
    for a in i.difference(j) {
        for b in j.difference(i) {
            let p = tree_path(g, a, b);
            if p[1..p.len() - 1].iter().all(|&x| both.contains(x)) {
                paths.push(IPath(p));
            }
        }
    }
    fn grow(paths: &[IPath], from: usize, used: VertexSet, chosen: &mut Vec<IPath>, out: &mut Vec<Vec<IPath>>) {
        out.push(chosen.clone());
        for k in from..paths.len() {
            let vs = paths[k].vertex_set();
            if vs.is_disjoint(used) {
                chosen.push(paths[k].clone());
                grow(paths, k + 1, used.union(vs), chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(&paths, 0, VertexSet::EMPTY, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `Y_I·Y_J = Σ_P Y_{(I∪J)∖P}·Y_{(I∩J)∖P}` over the families `P` of
/// [`tree_path_families`].
pub fn tree_ptolemy_expand(g: &Digraph, i: VertexSet, j: VertexSet) -> Result<ClusterCombination> {
    let n = g.vertex_count();
    let mut out = ClusterCombination::zero(n);
    for family in tree_path_families(g, i, j)? {
        let used = family.iter().fold(VertexSet::EMPTY, |acc, p| acc.union(p.vertex_set()));
        let outer = i.union(j).difference(used);
        let inner = i.intersection(j).difference(used);
        let t = outer.to_multiset().sum(&inner.to_multiset());
        out.add_term(ClusterMonomialIndex::new(VertexMultiset::new(), t)?, &CoefPoly::one(n))?;
    }
    Ok(out)
}
