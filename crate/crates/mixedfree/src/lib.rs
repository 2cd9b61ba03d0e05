//! Constructive coloring of graphs whose ordered adjacency matrices avoid
//! d-almost-mixed minors, with the exact combinatorial oracles, matrix
//! machinery, compression calculus, recurrence tabulation, and generators
//! needed to exercise and verify the construction at desk scale.

pub mod clique;
pub mod cograph;
pub mod coloring;
pub mod compress;
pub mod engine;
pub mod error;
pub mod format;
pub mod gen;
pub mod graph;
pub mod matrix;
pub mod recurrence;
pub mod twinwidth;

pub use error::{Error, Result};
pub use graph::{Coloring, OrderedGraph};
