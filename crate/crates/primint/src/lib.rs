//! Std companion of `primint-core`: grid files, JSON job specifications and
//! reports, the command dispatcher behind the `primint` binary, and the
//! verification suites.

mod error;
pub mod gridio;
pub mod job;
pub mod report;
pub mod run;
pub mod verify;

pub use error::CliError;
pub use job::{FnRef, JobSpec, Real};
pub use report::{Report, SuiteRow};
pub use run::{run, COMMANDS};
