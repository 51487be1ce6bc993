//! Spectral partial partitioning (crude partitioning, refinement, filtering), its completion
//! into a full buffered partition, and the end-to-end driver.

mod complete;
mod constants;
pub mod crude;
mod driver;
pub mod eta;
pub mod refine;

pub use complete::{complete_partition, merge_tail};
pub use constants::{AlgoConstants, FilterMode};
pub use crude::{crude_partition, CrudePartition};
pub use driver::{
    buffered_k_partition, driver_params, partial_partition, partial_partition_on, spectral_embedding, DriverParams,
    KPartition, PartialPartition, RunDiagnostics,
};
pub use eta::{eta_costs, EtaCosts};
pub use refine::{refine_and_discard, Tuple};
