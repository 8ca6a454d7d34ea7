pub mod baseline;
pub mod construct;
pub mod cover;
pub mod error;
pub mod exact;
pub mod factor;
pub mod generate;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod partition;
pub mod pipeline;
pub mod rebalance;
pub mod structure;

pub use error::{Error, Result};
pub use exact::Surd;
pub use graph::{parse_edge_list, Edge, Graph, VertexMapping};
pub use partition::{verify_partition, PathPartition};
pub use pipeline::{
    solve, solve_11plus, solve_910, CoverMode, SolveConfig, SolveReport, TierChoice,
};
