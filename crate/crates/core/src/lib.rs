//! Topic overlay mapping.
//!
//! A corpus of bibliographic records is turned into a co-word term graph,
//! the graph is partitioned into topics, and the topics are linked into a
//! basemap. Any document set can then be overlaid on the basemap as a
//! distribution over topics, measured for Rao-Stirling diversity, compared
//! by proximity-weighted cosine similarity, clustered, and profiled over
//! time.

pub mod basemap;
pub mod clustering;
pub mod error;
pub mod export;
pub mod ingest;
pub mod matrix;
pub mod network;
pub mod overlay;
pub mod par;
pub mod pipeline;
pub mod synthetic;
pub mod trends;

pub use error::{Result, TomError};
pub use matrix::SquareMatrix;
pub use par::Execution;
