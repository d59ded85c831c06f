//! Node and edge centralities on undirected graphs, with the tooling to
//! study how well cheap stochastic scores track the exact ones.
//!
//! - [`graph`]: immutable simple graph, connected components
//! - [`generators`]: Erdős–Rényi, Newman–Watts and Holme–Kim models
//! - [`centrality`]: degree, betweenness, closeness, clustering
//! - [`got`]: Game of Thieves node and edge scores
//! - [`kpath`]: WERW-Kpath edge scores and an exact k-path oracle
//! - [`stats`]: Pearson, Spearman and Kendall coefficients
//! - [`harness`]: experiment matrix runner and reports
//! - [`io`]: edge-list and score file formats

pub mod centrality;
pub mod error;
pub mod generators;
pub mod got;
pub mod graph;
pub mod harness;
pub mod io;
pub mod kpath;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{EdgeScores, Graph, NodeScores};
