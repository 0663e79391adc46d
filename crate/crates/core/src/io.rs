//! Text formats: graph files, monomial specs, and vertex lists.
//!
//! A graph file has one `vertices:` line listing whitespace-separated labels,
//! then one edge per line, `u -> v` for a directed edge or `u -- v` for both
//! directions. Blank lines and lines starting with `#` are ignored.
//!
//! ```
//! use graph_lp::io::parse_graph;
//!
//! let g = parse_graph("vertices: a b c\na -> b\nb -- c\n").unwrap();
//! assert_eq!(g.edge_count(), 3);
//! ```
//!
//! A monomial is written as a whitespace-separated list of tokens. `X:a,b,b`
//! contributes `X_a·X_b²`; `Y:{a,b},{c}` contributes `Y_{a,b}·Y_{c}`.
//! Tokens may repeat and accumulate.

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexMultiset, VertexSet};
use crate::multiset::Multiset;
use crate::nested::MonomialIndex;

/// Parses the graph text format, reporting errors with 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<Digraph> {
    let mut graph: Option<Digraph> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::parse(line_no, other.to_string()),
        };
        if let Some(rest) = line.strip_prefix("vertices:") {
            if graph.is_some() {
                return Err(Error::parse(line_no, "second `vertices:` line"));
            }
            let labels: Vec<&str> = rest.split_whitespace().collect();
            graph = Some(Digraph::from_labels(labels, std::iter::empty::<(&str, &str)>()).map_err(at)?);
            continue;
        }
        let g = graph
            .as_mut()
            .ok_or_else(|| Error::parse(line_no, "edge before the `vertices:` line"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [a, arrow, b] = tokens[..] else {
            return Err(Error::parse(line_no, format!("expected `u -> v` or `u -- v`, found `{line}`")));
        };
        let u = g.vertex(a).map_err(at)?;
        let v = g.vertex(b).map_err(at)?;
        match arrow {
            "->" => g.add_edge(u, v).map_err(at)?,
            "--" => {
                g.add_edge(u, v).map_err(at)?;
                g.add_edge(v, u).map_err(at)?;
            }
            _ => return Err(Error::parse(line_no, format!("unknown edge marker `{arrow}`"))),
        }
    }
    graph.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing `vertices:` line"))
}

/// Comma-separated labels; the empty string is the empty set.
pub fn parse_vertex_set(g: &Digraph, text: &str) -> Result<VertexSet> {
    let mut out = VertexSet::EMPTY;
    for label in split_list(text) {
        let v = g.vertex(label)?;
        if out.contains(v) {
            return Err(Error::Syntax(format!("vertex `{label}` listed twice")));
        }
        out.insert(v);
    }
    Ok(out)
}

/// Comma-separated labels with repetition.
pub fn parse_vertex_multiset(g: &Digraph, text: &str) -> Result<VertexMultiset> {
    split_list(text).map(|l| g.vertex(l)).collect()
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Parses `{a,b},{c},...` into sets.
fn parse_set_list(g: &Digraph, text: &str) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('{')
            .ok_or_else(|| Error::Syntax(format!("expected `{{` at `{rest}`")))?;
        let close = body
            .find('}')
            .ok_or_else(|| Error::Syntax(format!("unclosed `{{` in `{text}`")))?;
        out.push(parse_vertex_set(g, &body[..close])?);
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::Syntax(format!("trailing comma in `{text}`")));
            }
        } else if !rest.is_empty() {
            return Err(Error::Syntax(format!("expected `,` before `{rest}`")));
        }
    }
    Ok(out)
}

/// Parses a monomial such as `X:1,1 Y:{1,2} Y:{3}`.
pub fn parse_monomial(g: &Digraph, text: &str) -> Result<MonomialIndex> {
    let mut u = VertexMultiset::new();
    let mut s = Multiset::new();
    for token in text.split_whitespace() {
        if let Some(list) = token.strip_prefix("X:") {
            u.extend(parse_vertex_multiset(g, list)?.iter_repeated().copied());
        } else if let Some(list) = token.strip_prefix("Y:") {
            s.extend(parse_set_list(g, list)?);
        } else if token != "1" {
            return Err(Error::Syntax(format!("unknown monomial token `{token}`")));
        }
    }
    Ok(MonomialIndex::new(u, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DENSE: &str = "# dense example\nvertices: 1 2 3 4\n1 -- 2\n1 -- 3\n1 -- 4\n2 -> 3\n3 -> 2\n3 -- 4\n";

    #[test]
    fn parses_and_roundtrips() {
        let g = parse_graph(DENSE).unwrap();
        assert_eq!(g, crate::graph::tests::dense4());
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_graph("vertices: a b\n\na -> c\n").unwrap_err();
        assert_eq!(err, Error::parse(3, "unknown vertex `c`"));
        assert!(matches!(parse_graph("a -> b\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("vertices: a b\na => b\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("vertices: a b\na -> b\na -- b\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("vertices: a a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parses_monomials() {
        let g = parse_graph(DENSE).unwrap();
        let m = parse_monomial(&g, "X:1,1 Y:{1,2},{3} Y:{1,2} Y:{}").unwrap();
        assert_eq!(m.u.len(), 2);
        assert_eq!(m.s.len(), 3);
        assert_eq!(m.s.multiplicity(&g.set_from_labels(&["1", "2"]).unwrap()), 2);
        assert_eq!(parse_monomial(&g, "").unwrap(), MonomialIndex::default());
        assert!(parse_monomial(&g, "Z:1").is_err());
        assert!(parse_monomial(&g, "Y:{1,2").is_err());
        assert!(parse_monomial(&g, "Y:{1},").is_err());
        assert!(matches!(parse_monomial(&g, "X:9"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn parses_sets() {
        let g = parse_graph(DENSE).unwrap();
        assert_eq!(parse_vertex_set(&g, "").unwrap(), VertexSet::EMPTY);
        assert_eq!(parse_vertex_set(&g, "2, 1").unwrap().len(), 2);
        assert!(parse_vertex_set(&g, "1,1").is_err());
    }
}
