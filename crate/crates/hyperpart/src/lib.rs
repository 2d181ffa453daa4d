//! Multilevel spectral hypergraph partitioning toolkit.
//!
//! The crate coarsens hypergraphs by estimated hyperedge effective
//! resistances (Krylov-subspace node embeddings over a star expansion),
//! refines clusters with a strongly-local max-flow procedure minimizing
//! local conductance, and produces epsilon-balanced k-way partitions with
//! minimized hyperedge cut. Everything is exposed as a library plus the
//! `hyperpart` batch CLI.

pub mod cli;
pub mod coarsening;
pub mod embedding;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod localflow;
pub mod maxflow;
pub mod metrics;
pub mod oracle;
pub mod partition;
pub mod resistance;

pub use error::{Error, Result};
pub use hypergraph::{ClusterMap, Hypergraph, NodeSet, Partition};
