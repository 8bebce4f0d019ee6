//! Embedding-space toolkit: unit-hypersphere geometry, domain-gap mean
//! shifts, identity banks with near-duplicate filtering, deterministic
//! geodesic sampling plans, and face-verification metrics.
//!
//! Everything operates on plain f64 vectors; file formats and the CLI live
//! in the companion `embio-cli` crate. All operations are pure, generators
//! are caller-owned, and parallel paths produce results independent of
//! worker count.

pub mod domainshift;
pub mod error;
pub mod evalkit;
pub mod hypersphere;
pub mod identitybank;
pub mod sampler;

pub(crate) mod vecmath;

pub use error::{Error, Result};
pub use hypersphere::{BetaParams, Embedding};
