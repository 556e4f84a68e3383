//! Library side of the `sno` command: matrix file I/O, argument definitions
//! and the command implementations.

pub mod args;
pub mod commands;
pub mod matrix_file;

pub use commands::run;
