use std::collections::BTreeSet;

use graph_lp::generate::{all_digraphs, digraphs_up_to_isomorphism, random_digraph};
use graph_lp::nested::{
    enumerate_maximal_nested_collections, is_nested_with, multiset_to_nested, nested_collections_by_search,
    nested_collections_via_multisets, DisjointCheck,
};
use graph_lp::{Digraph, Multiset, VertexSet};

fn graphs() -> Vec<Digraph> {
    let mut out: Vec<Digraph> = (0..=3).flat_map(all_digraphs).collect();
    out.extend(digraphs_up_to_isomorphism(4));
    out.extend((0..30).map(|seed| random_digraph(5, 0.3 + 0.015 * seed as f64, seed)));
    out
}

/// Laminar families drawn from `pool`.
fn laminar_families(pool: &[VertexSet]) -> Vec<Vec<VertexSet>> {
    fn go(pool: &[VertexSet], from: usize, cur: &mut Vec<VertexSet>, out: &mut Vec<Vec<VertexSet>>) {
        out.push(cur.clone());
        for i in from..pool.len() {
            let s = pool[i];
            if cur.iter().all(|&t| s.is_subset(t) || t.is_subset(s) || s.is_disjoint(t)) {
                cur.push(s);
                go(pool, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn sibling_check_agrees_with_exhaustive_check() {
    for g in graphs() {
        let pool: Vec<VertexSet> = g
            .all()
            .subsets()
            .filter(|s| !s.is_empty() && (g.vertex_count() <= 3 || g.is_strongly_connected(*s).unwrap()))
            .collect();
        for family in laminar_families(&pool) {
            let m: Multiset<VertexSet> = family.iter().copied().collect();
            assert_eq!(
                is_nested_with(&g, &m, DisjointCheck::Siblings).unwrap(),
                is_nested_with(&g, &m, DisjointCheck::Exhaustive).unwrap(),
                "{family:?} on {g:?}"
            );
        }
    }
}

#[test]
fn enumerators_agree_and_maximal_collections_fill_their_set() {
    let mut sizes = BTreeSet::new();
    for g in graphs().into_iter().filter(|g| g.vertex_count() <= 4) {
        for w in g.all().subsets() {
            assert_eq!(
                nested_collections_via_multisets(&g, w).unwrap(),
                nested_collections_by_search(&g, w).unwrap()
            );
            for m in enumerate_maximal_nested_collections(&g, w).unwrap() {
                sizes.insert((w.len(), m.len()));
            }
        }
    }
    // Observed: a maximal nested collection on W has exactly |W| members.
    assert!(sizes.iter().all(|&(w, m)| w == m), "{sizes:?}");
}

#[test]
fn images_are_nested_and_strongly_connected() {
    for g in graphs().into_iter().filter(|g| g.vertex_count() <= 4) {
        for code in 0..3u32.pow(g.vertex_count() as u32) {
            let mut c = code;
            let t = g
                .vertices()
                .flat_map(|v| {
                    let k = c % 3;
                    c /= 3;
                    std::iter::repeat_n(v, k as usize)
                })
                .collect();
            let n = multiset_to_nested(&g, &t).unwrap();
            assert!(is_nested_with(&g, n.members(), DisjointCheck::Exhaustive).unwrap());
            assert!(n.members().iter().all(|(&s, _)| g.is_strongly_connected(s).unwrap()));
        }
    }
}
