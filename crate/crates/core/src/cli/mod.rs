//! Model files, pipeline orchestration and reports.

pub mod app;
pub mod dsl;
pub mod report;

pub use app::{execute, exit_code, Cli};
pub use dsl::parse_model;
pub use report::{run_pipeline, Report};
