//! Configuration files, experiment runs with CSV/JSON output, budget sweeps
//! and the packaged verification suites.

mod config;
mod output;
mod runner;
mod suites;
mod sweep;

pub use config::{
    parse_config, parse_config_str, Algorithm, DomainConfig, ExperimentConfig, OracleConfig, OutputConfig,
    ProblemConfig, ProblemFamily,
};
pub use output::{format_trace_csv, parse_trace_csv, write_atomic, TRACE_HEADER};
pub use runner::{constrained_optimum, run_experiment, ExperimentOutcome, RateFit, Summary};
pub use suites::{run_suite, CriterionResult, SuiteReport, SUITES};
pub use sweep::{parse_budgets, run_sweep, sweep_threads, SweepReport, THREADS_ENV};
