//! Library side of the `rmc` command-line tool: file formats, the seeded
//! instance generator, subcommand logic and the corpus benchmark.

pub mod bench;
pub mod commands;
pub mod format;
pub mod generate;
