//! Command-line front end for `polyft-core`: file formats, run
//! configuration, report documents and parallel drivers.

pub mod cli;
pub mod config;
pub mod formats;
pub mod parallel;
pub mod report;
