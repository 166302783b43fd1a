//! Experiment plumbing: suites of runs, result tables, aggregation,
//! performance profiles and synthetic instances.

mod config;
mod generate;
mod suite;
mod table;

pub use config::{RunConfig, DEFAULT_KS};
pub use generate::{generate_instance, Generated, InstanceKind, PowerLawSizes};
pub use suite::{load_instance, run_instances, run_suite, Instance};
pub use table::{
    geometric_mean, improvement_over, performance_profile, shifted_geometric_mean,
    write_improvement_csv, write_profile_csv, Improvement, Metric, ProfilePoint, ResultRow,
    ResultTable, SuiteFailure,
};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("baseline {baseline} has no result for instance {instance} at k = {k}")]
    MissingBaseline {
        baseline: String,
        instance: String,
        k: u32,
    },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}
