//! One-pass streaming hypergraph partitioning.
//!
//! Vertices arrive once, each with the list of nets it belongs to, and are
//! assigned irrevocably to one of `k` blocks. [`Freight`] scores only the
//! blocks that already hold pins of the vertex's nets and compares them with
//! the least loaded block, so a vertex costs `O(d(v))` and the whole stream
//! `O(n + m + k + sum |e|)`, with `O(m + k)` state.
//!
//! ```
//! use freight::io::{read_hgr, transpose_to_stream};
//! use freight::{evaluate, partition_stream, Algorithm, Objective, PartitionConfig};
//!
//! let h = read_hgr("3 4\n1 2\n2 3\n3 4\n".as_bytes()).unwrap();
//! let stream = transpose_to_stream(&h);
//! let cfg = PartitionConfig::new(Algorithm::Freight(Objective::Connectivity), 2);
//! let result = partition_stream(stream.stream(), &cfg).unwrap();
//! let report = evaluate(&h, &result.assignment, 2).unwrap();
//! assert!(report.satisfies_lmax(cfg.epsilon));
//! ```

pub mod baselines;
pub mod engine;
pub mod fennel;

pub mod harness;
pub mod io;
pub mod metrics;
pub mod params;
pub mod partition;
pub mod registry;
pub mod select;

/// 0-based block index.
pub type BlockId = u32;

pub use baselines::{hashing_assign, Hashing, MinMaxN2P, NetToBlocksIndex};
pub use fennel::{fennel_partition, naive_fennel, FennelGraph};
pub use engine::{Freight, NetStatus, NetTracker};
pub use metrics::{evaluate, evaluate_graph, EvalError, EvaluationReport, GraphReport};
pub use params::{compute_alpha, compute_lmax, Objective, ScoreParams};
pub use partition::{
    partition_stream, partition_stream_with, read_assignment, write_assignment, Algorithm,
    PartitionConfig, PartitionError, PartitionResult, StreamingPartitioner,
};
pub use registry::BlockRegistry;
