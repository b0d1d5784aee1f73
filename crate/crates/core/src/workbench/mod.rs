//! File formats, report rendering and the command-line front end.

pub mod cli;
pub mod format;
pub mod report;
