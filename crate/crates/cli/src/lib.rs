//! Command-line and HTTP front ends for the `ndgraph` rewriting engine.

pub mod commands;
pub mod input;
pub mod serve;

pub use commands::CliError;
