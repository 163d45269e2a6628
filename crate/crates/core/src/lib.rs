//! Whitehead partitions of right-angled Artin groups, the blowup cube
//! complexes built from compatible collections of them, and search for
//! finite groups of outer automorphisms acting on such complexes.

pub mod blowup;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod invariance;
pub mod partition;
pub mod raag;
pub mod realization;
pub mod restriction;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{DoubledGraph, FoldClasses, SignedSet, SignedVertex, SimplicialGraph, VertexSet};
