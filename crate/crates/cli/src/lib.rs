//! Library half of the `dmaj` binary: JSON I/O, one function per subcommand
//! and the regression cases behind `reproduce`.

pub mod commands;
pub mod io;
pub mod render;
pub mod reproduce;

pub use commands::{Outcome, Report, Settings};
pub use io::{CliError, CliResult, MatrixFile, VectorFile};
