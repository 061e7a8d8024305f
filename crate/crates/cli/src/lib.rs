//! File formats and command-line front end for `cubeterm-core`.

pub mod cli;
pub mod json;
pub mod run;

pub use cli::Cli;
pub use run::{execute, execute_with, Outcome};
