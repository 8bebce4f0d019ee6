//! File formats and the CLI for the embio pipeline.
//!
//! - [`emb1`]: the EMB1 binary embedding format (magic, count, dim, f32
//!   payload) plus the shift-vector JSON sidecar.
//! - [`manifest`]: JSONL label manifests mapping labels to payload rows.
//! - [`pairs`]: verification-pairs CSV.
//! - [`planio`]: sampling-plan JSONL manifests.
//! - [`config`]: the run-config TOML document with `EMBIO_*` environment
//!   overrides.
//! - [`report`]: JSON metric reports and the ROC CSV.
//! - [`cli`] / [`commands`]: the `embio` binary's subcommands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod emb1;
pub mod error;
pub mod manifest;
pub mod pairs;
pub mod planio;
pub mod report;
pub mod stage;

pub use error::FormatError;
