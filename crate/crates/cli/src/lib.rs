//! Front end for `relaycap`: channel and witness files, CSV reports and the
//! `bounds`, `simulate` and `verify-examples` commands.

pub mod args;
pub mod channel_file;
pub mod commands;
pub mod error;
pub mod report;
pub mod witness_file;

pub use error::CliError;
