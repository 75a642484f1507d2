//! Standard-library companion to `neurolds-core`: file formats, thread-pool
//! evaluators and the `neurolds` command line.

pub mod cli;
pub mod io;
pub mod parallel;

pub use neurolds_core as core;
