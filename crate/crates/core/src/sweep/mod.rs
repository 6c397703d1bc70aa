//! Parameter grids, single-experiment execution and result aggregation.
//!
//! Scheduling and persistence of a whole sweep live in the `predcode` crate;
//! this module supplies the pure pieces: [`enumerate_grid`],
//! [`PreparedCorpus`] (preprocessing shared by every configuration with the
//! same stemming flag and n-gram order), [`run_prepared`], and the reports.

mod experiment;
mod grid;
mod report;

pub use experiment::{
    run_experiment, run_prepared, train_and_rank, ExperimentOutput, ExperimentResult, PreparedCorpus,
    RunDiagnostics,
};
pub use grid::{
    enumerate_grid, parse_flag, Dimension, DimensionValue, ExperimentConfig, ParameterGrid, DEFAULT_SEED,
};
pub use report::{aggregate_by_parameter, extreme_combinations, AggregateReport, Extreme, Extremes, ParameterAggregate};

#[cfg(test)]
mod tests;
