//! Batch front end: configuration, verification suites, and the commands
//! behind the `slicelab` binary.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

pub use commands::{exit_code, run, Command, Invocation, Outcome};
pub use config::RunConfig;
pub use report::{CheckRecord, Status, SuiteReport};
