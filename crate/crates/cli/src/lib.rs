//! Pipeline runner for the pair-correlation theory of a Bose liquid: config
//! parsing, S(q) ingestion, temperature sweeps, structure-factor inversion,
//! effective masses, the density-matrix laboratory and verification suites.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dm_lab;
pub mod error;
pub mod ingest;
pub mod invert;
pub mod mass;
pub mod masses;
pub mod output;
pub mod sweep;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, Result};
