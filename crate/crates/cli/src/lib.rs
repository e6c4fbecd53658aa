//! File formats and command-line front end for the latent-interp toolkit.
//!
//! The algorithmic core lives in `latent-interp-core`; this crate adds the
//! batch serialization formats (CSV and the LSB1 binary container), the JSON
//! report writers, and the `latent-interp` binary.

pub mod formats;
pub mod run;

pub use run::{run, Cli, CliError, RunConfig, RunOutcome, DEFAULT_SEED};
