//! IO companion to `tautrel-core`: the persistent cache store, the
//! base-constants file formats, JSON verification reports, the parallel
//! suite runner, and the command-line interface.

pub mod cache;
pub mod cli;
pub mod constants;
pub mod engine;
pub mod report;
pub mod runner;

pub use engine::Engine;
