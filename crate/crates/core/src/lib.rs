//! E-graphs with bindings.
//!
//! Hierarchical e-hypergraphs represent terms of a closed monoidal category
//! with a join-semilattice enrichment. Boxes carry alternatives (e-classes) and
//! lambda abstractions, and rewriting is convex double-pushout rewriting of
//! extended cospans.

pub mod cli;
pub mod cospan;
pub mod ehyp;
pub mod interp;
pub mod rewrite;
pub mod saturate;
pub mod signature;
pub mod syntax;
pub mod term;
