//! Scenario files in, reports and CSV tables out.

pub mod error;
pub mod input;
pub mod report;
pub mod run;
pub mod sample;

pub use error::CliError;
pub use input::{Overrides, ScenarioFile};
pub use run::{execute, run, Command};
