//! Command implementations and the report schema behind the `pogline`
//! binary.

pub mod commands;
pub mod report;

pub use commands::{Failure, Global, Mode};
pub use report::Report;
