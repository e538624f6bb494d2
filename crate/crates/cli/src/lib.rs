//! Command-line front end: spec files, word files, reports and commands.

pub mod commands;
pub mod report;
pub mod specfile;
pub mod wordfile;
