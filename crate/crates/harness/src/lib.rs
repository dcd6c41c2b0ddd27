//! Dataset ingestion, experiments and the command line front end for the
//! bounds in `chromatic-pac`.

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod sweep;
pub mod synth;
pub mod validity;

pub use error::HarnessError;
