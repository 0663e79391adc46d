//! Executable checks: leading and vanishing coefficients of cluster
//! monomials, linear independence by triangularity, and positivity scans.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expand::{ClusterCombination, Expander, Oracle};
use crate::graph::{Digraph, VertexMultiset, VertexSet};
use crate::laurent::{CoefPoly, LaurentMonomialIndex};
use crate::multiset::Multiset;
use crate::nested::{ClusterMonomialIndex, MonomialIndex};

/// The Laurent monomial `⟨U, T⟩ = X_U / X_T`.
pub fn witness_monomial(idx: &ClusterMonomialIndex) -> LaurentMonomialIndex {
    LaurentMonomialIndex::new(idx.u().clone(), idx.t().clone()).expect("cluster indices are disjoint")
}

/// The coefficient of `⟨U, T⟩` in `π(U, T)`; fails unless it is `∏_{v∈T} A_v`.
pub fn check_leading_coefficient(oracle: &Oracle, idx: &ClusterMonomialIndex) -> Result<CoefPoly> {
    let n = oracle.graph().vertex_count();
    let c = oracle.cluster_monomial(idx)?.coefficient_of(&witness_monomial(idx));
    if c != CoefPoly::a_product(n, idx.t()) {
        return Err(Error::Assertion(format!(
            "leading coefficient of {} is {}",
            idx.render(oracle.graph()),
            c.render(oracle.graph().labels())
        )));
    }
    Ok(c)
}

/// When `U_1 ⊄ U_2` or `T_1 ⊉ T_2`, checks that `⟨U_2, T_2⟩` has coefficient
/// zero in `π(U_1, T_1)`. Returns whether that hypothesis held.
pub fn check_vanishing_coefficient(
    oracle: &Oracle,
    idx1: &ClusterMonomialIndex,
    idx2: &ClusterMonomialIndex,
) -> Result<bool> {
    let applies = !idx1.u().is_contained_in(idx2.u()) || !idx2.t().is_contained_in(idx1.t());
    if applies {
        let c = oracle.cluster_monomial(idx1)?.coefficient_of(&witness_monomial(idx2));
        if !c.is_zero() {
            let g = oracle.graph();
            return Err(Error::Assertion(format!(
                "coefficient of the witness of {} in {} is {}",
                idx2.render(g),
                idx1.render(g),
                c.render(g.labels())
            )));
        }
    }
    Ok(applies)
}

/// Outcome of [`check_independence`].
#[derive(Clone, Debug)]
pub struct IndependenceReport {
    /// Indices sorted by `|U| - |T|`, each with its witness and the
    /// coefficient of the witness in its own monomial.
    pub entries: Vec<(ClusterMonomialIndex, LaurentMonomialIndex, CoefPoly)>,
    /// Number of off-diagonal coefficients checked to vanish.
    pub zero_checks: usize,
}

/// Certifies that the given cluster monomials are linearly independent
/// over `R`.
///
/// Sorted by `|U| - |T|`, the matrix of witness coefficients is triangular
/// with nonzero diagonal: the witness of each index has a nonzero
/// coefficient in its own monomial and a zero coefficient in every monomial
/// that comes later.
pub fn check_independence(oracle: &Oracle, indices: &[ClusterMonomialIndex]) -> Result<IndependenceReport> {
    let mut order = indices.to_vec();
    order.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    if order.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("indices must be distinct".into()));
    }
    let mut entries = Vec::with_capacity(order.len());
    let mut zero_checks = 0;
    for (k, idx) in order.iter().enumerate() {
        let witness = witness_monomial(idx);
        let diag = check_leading_coefficient(oracle, idx)?;
        for later in &order[k + 1..] {
            let c = oracle.cluster_monomial(later)?.coefficient_of(&witness);
            if !c.is_zero() {
                let g = oracle.graph();
                return Err(Error::Assertion(format!(
                    "witness of {} appears in {}",
                    idx.render(g),
                    later.render(g)
                )));
            }
            zero_checks += 1;
        }
        entries.push((idx.clone(), witness, diag));
    }
    Ok(IndependenceReport { entries, zero_checks })
}

/// Bounds for [`scan_positivity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Most members in a `Y`-monomial.
    pub max_members: usize,
    /// Largest member.
    pub max_member_size: usize,
    /// Most `X` factors (with repetition) in a mixed monomial.
    pub max_x: usize,
    /// Also compare every expansion with its Laurent re-expansion.
    pub check_oracle: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_members: 2, max_member_size: 3, max_x: 2, check_oracle: false }
    }
}

impl Budget {
    /// Whether the budget admits no nontrivial monomial.
    pub fn is_empty(&self) -> bool {
        (self.max_members == 0 || self.max_member_size == 0) && self.max_x == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Finding,
}

/// What a record checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CheckKind {
    /// Cluster expansions of `Y`-monomials have nonnegative coefficients.
    #[serde(rename = "y-positivity")]
    YPositivity,
    /// Cluster expansions of monomials with `X` factors have coefficients
    /// in `Z≥0[A_v]`.
    #[serde(rename = "positivity")]
    Positivity,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::YPositivity => "y-positivity",
            CheckKind::Positivity => "positivity",
        })
    }
}

/// One line of a scan report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub status: Status,
    pub kind: CheckKind,
    pub graph: String,
    pub detail: String,
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Ok => "ok",
            Status::Finding => "finding",
        };
        write!(f, "status={status} kind={} graph={} detail={}", self.kind, self.graph, self.detail)
    }
}

/// Records in deterministic order plus totals.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub records: Vec<Record>,
    pub graphs: usize,
    pub checked: usize,
    pub findings: usize,
}

impl ScanReport {
    pub fn summary(&self) -> String {
        format!("summary graphs={} checked={} findings={}", self.graphs, self.checked, self.findings)
    }

    /// Records, one per line, then the summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

fn sets_up_to(g: &Digraph, max_size: usize) -> Vec<VertexSet> {
    let mut sets: Vec<VertexSet> = g.all().subsets().filter(|s| !s.is_empty() && s.len() <= max_size).collect();
    sets.sort();
    sets
}

/// Multisets of size `1..=max` drawn from `items`, as nondecreasing index
/// sequences.
fn multisets<T: Ord + Clone>(items: &[T], max: usize) -> Vec<Multiset<T>> {
    fn go<T: Ord + Clone>(items: &[T], from: usize, left: usize, cur: &mut Vec<T>, out: &mut Vec<Multiset<T>>) {
        if !cur.is_empty() {
            out.push(cur.iter().cloned().collect());
        }
        if left == 0 {
            return;
        }
        for i in from..items.len() {
            cur.push(items[i].clone());
            go(items, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, max, &mut Vec::new(), &mut out);
    out
}

/// Monomials covered by `budget`: first the `Y`-monomials, then those with
/// at least one `X` factor.
pub fn budget_monomials(g: &Digraph, budget: &Budget) -> Vec<(CheckKind, MonomialIndex)> {
    let ys = if budget.max_member_size == 0 {
        Vec::new()
    } else {
        multisets(&sets_up_to(g, budget.max_member_size), budget.max_members)
    };
    let verts: Vec<_> = g.vertices().collect();
    let xs: Vec<VertexMultiset> = multisets(&verts, budget.max_x);
    let mut out: Vec<(CheckKind, MonomialIndex)> = ys
        .iter()
        .map(|s| (CheckKind::YPositivity, MonomialIndex::new(VertexMultiset::new(), s.clone())))
        .collect();
    for u in &xs {
        out.push((CheckKind::Positivity, MonomialIndex::new(u.clone(), Multiset::new())));
        for s in &ys {
            out.push((CheckKind::Positivity, MonomialIndex::new(u.clone(), s.clone())));
        }
    }
    out
}

fn compact_graph(g: &Digraph) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{}>{}", g.label(u), g.label(v))).collect();
    format!("vertices={} edges={}", g.labels().join(","), edges.join(","))
}

fn finding_detail(oracle: &Oracle, m: &MonomialIndex, c: &ClusterCombination) -> Result<String> {
    let g = oracle.graph();
    let terms: Vec<String> = c.render(g).lines().map(str::to_owned).collect();
    let poly = oracle.monomial(m)?;
    Ok(format!(
        "monomial={} expansion={} laurent={} {}",
        m.render(g),
        terms.join(" + "),
        poly.render_fraction(g.labels())?,
        compact_graph(g)
    ))
}

/// Expands every monomial within `budget` into cluster monomials and
/// reports each expansion with a negative coefficient.
///
/// Emits one `ok` record per check kind with the number of monomials
/// checked, followed by the findings in enumeration order.
pub fn scan_positivity(g: &Digraph, budget: &Budget) -> Result<ScanReport> {
    let oracle = Oracle::new(g.clone());
    let items = budget_monomials(g, budget);
    let results: Vec<Result<Option<Record>>> = items
        .par_iter()
        .map_init(
            || Expander::new(g),
            |exp, (kind, m)| -> Result<Option<Record>> {
                let c = exp.span(m)?;
                if budget.check_oracle && c.to_laurent(&oracle)? != oracle.monomial(m)? {
                    return Err(Error::Assertion(format!("expansion of {} disagrees with its Laurent form", m.render(g))));
                }
                if c.is_nonnegative() {
                    return Ok(None);
                }
                Ok(Some(Record {
                    status: Status::Finding,
                    kind: *kind,
                    graph: g.fingerprint(),
                    detail: finding_detail(&oracle, m, &c)?,
                }))
            },
        )
        .collect();
    let mut findings = Vec::new();
    for r in results {
        findings.extend(r?);
    }
    let mut records = Vec::new();
    for kind in [CheckKind::YPositivity, CheckKind::Positivity] {
        let count = items.iter().filter(|(k, _)| *k == kind).count();
        let found = findings.iter().filter(|r| r.kind == kind).count();
        let status = if found == 0 { Status::Ok } else { Status::Finding };
        records.push(Record { status, kind, graph: g.fingerprint(), detail: format!("checked={count} findings={found}") });
    }
    let n_findings = findings.len();
    records.extend(findings);
    Ok(ScanReport { records, graphs: 1, checked: items.len(), findings: n_findings })
}

/// [`scan_positivity`] over many graphs, merged in input order.
///
/// `jobs` bounds the worker count; `None` uses the global pool.
pub fn scan_graphs(graphs: &[Digraph], budget: &Budget, jobs: Option<usize>) -> Result<ScanReport> {
    let run = || -> Result<ScanReport> {
        let reports: Vec<Result<ScanReport>> = graphs.par_iter().map(|g| scan_positivity(g, budget)).collect();
        let mut total = ScanReport::default();
        for r in reports {
            let r = r?;
            total.graphs += r.graphs;
            total.checked += r.checked;
            total.findings += r.findings;
            total.records.extend(r.records);
        }
        Ok(total)
    };
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?
            .install(run),
        None => run(),
    }
}
