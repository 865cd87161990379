//! Library side of the `gwloc` command-line tool: expression parsing,
//! configuration files, the result cache and command execution.

pub mod cache;
pub mod cases;
pub mod config;
pub mod parse;
pub mod run;
