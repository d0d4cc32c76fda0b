//! Command-line front end: the model file format, on-disk artifacts for
//! programs/certificates/traces, the seeded law suite, and the command
//! dispatcher.

pub mod artifact;
pub mod laws;
pub mod model;
pub mod report;
pub mod run;

pub use report::{Report, Status};
pub use run::run;
