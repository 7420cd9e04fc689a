//! Tournament colorability, ordered cores, forcing constructions, matrix
//! regularity audits, Ruzsa-Szemerédi style lower-bound instances and the
//! triangle-free-cut reduction.
//!
//! Every exponential search takes an explicit node budget and reports
//! exhaustion as a distinct outcome.

pub mod bits;
pub mod budget;
pub mod colorability;
pub mod digraph;
pub mod error;
pub mod format;
pub mod forcing;
pub mod hardness;
pub mod lowerbound;
pub mod orderedhom;
pub mod regularity;

pub use budget::{Budget, Outcome};
pub use digraph::{
    count_embeddings, density, distance_to_h_free, transitive_subtournament, Digraph, Distance,
    Embedding, OrientedGraph, PairStats, Rational, Tournament,
};
pub use error::{Error, Result};
