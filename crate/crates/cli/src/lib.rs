//! Command-line front end for `chanint`: JSON channel files, pattern CSVs
//! and deterministic run reports.

pub mod channel_file;
pub mod cli;
pub mod output;

pub use channel_file::{parse_channel, parse_state, ChannelFile, FileError, StateFile};
pub use cli::run;
pub use output::{emit_pattern_csv, RunReport};
