//! Laurent phenomenon algebras of directed graphs.

pub mod error;
pub mod expand;
pub mod generate;
pub mod graph;
pub mod io;
pub mod laurent;
pub mod lp;
pub mod multiset;
pub mod nested;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Digraph, Vertex, VertexMultiset, VertexSet};
pub use laurent::{CoefPoly, LaurentMonomialIndex, LaurentPoly};
pub use multiset::Multiset;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/nested.md")]
    mod nested {}
    #[doc = include_str!("../../../book/src/expansions.md")]
    mod expansions {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
