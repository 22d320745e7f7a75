//! File formats, experiment configuration and the `graphwar` command line
//! for [`graphwar_core`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod edgelist;
pub mod error;
pub mod output;

pub use error::CliError;
