//! Benchmark harness comparing the probabilistic ranker against the coverage
//! baseline over mutation-seeded faults.

mod config;
mod report;
mod runner;

pub use config::{ExperimentConfig, ProgramEntry};
pub use report::{
    aggregate_rows, ExperimentReport, MutantRow, ProgramAggregate, RowClass, SkippedProgram,
    TechniqueAggregate, TechniqueOutcome,
};
pub use runner::{run_experiment, write_report};
