//! Graph sparsification workbench.
//!
//! Constructions for pairwise distance preservers, padded-core graph
//! clustering, subset spanners, and standard additive spanners, together with
//! instance generators, a brute-force verification oracle, and benchmark
//! sweeps over size/error tradeoffs.

pub mod clustering;
pub mod error;
pub mod graph;
pub mod instances;
pub mod io;
pub mod preserver;
pub mod spanner;
pub mod sweep;
pub mod tiebreak;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{BallMode, Dist, Graph, Node, PairSet, Path};
