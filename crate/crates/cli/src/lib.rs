//! Operator-facing layer over `heinz_core`: suite configuration, the
//! randomized suite runner and CSV sweeps.

pub mod config;
pub mod error;
pub mod suite;
pub mod sweep;

pub use config::{Plan, SuiteConfig, SuiteKind};
pub use error::{CliError, Result};
pub use suite::{instance_seed, run_suite, CheckReport, SuiteSummary};
pub use sweep::{emit_sweep, sweep_csv, TripleSpec};
