//! Instance generation, batch experiments and plotting.

mod generate;
mod plot;
mod suite;

pub use generate::{generate, GenParams, Metric, DEPOT_SITES, MAX_DRAWS};
pub use plot::{plot, plot_svg};
pub use suite::{
    run_solver, run_suite, InstanceRecord, SizeRow, SolverKind, SolverStats, SuiteConfig, SuiteReport, SuiteRun,
    SuiteTimings,
};
