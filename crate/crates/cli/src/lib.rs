//! Batch front end: problem files in, reports out.

pub mod config;
pub mod problem;
pub mod report;
pub mod run;

pub use config::Options;
pub use report::{Report, Verdict};
pub use run::{dispatch, Command, VerifyTarget};
