//! Buffered spectral partitioning.

pub mod error;
pub mod graph;
pub mod io;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{validate_partition, BufferedPartition, CutReport, Graph, VertexSet};
pub mod orthosep;
pub mod balanced;
pub mod certify;
pub mod cli;
pub mod generators;
pub mod partitioner;
pub mod report;
