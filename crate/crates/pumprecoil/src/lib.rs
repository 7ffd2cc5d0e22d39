//! Command-line front end and file formats for [`pumprecoil_core`].
//!
//! * [`config_file`] reads JSON configs and `--set` overrides,
//! * [`exec`] runs trajectory batches on a rayon pool with results that do
//!   not depend on the worker count,
//! * [`output`] writes CSV tables with a `#` header, their JSON mirrors, the
//!   run manifest and raw sample dumps,
//! * [`commands`] implements the subcommands of the `pumprecoil` binary.
//!
//! Exit codes: 0 ok, 2 config or usage error, 3 runtime failure, 4 Monte
//! Carlo disagreeing with the closed forms.

pub mod cli;
pub mod commands;
pub mod config_file;
pub mod error;
pub mod exec;
pub mod output;

pub use error::AppError;
