//! Deterministic evolutionary simulation of replicating multisets under a
//! hash-based fitness landscape, together with the spatial particle model it
//! replaces, an append-only event-log format, and the post-processing used to
//! measure fitness trajectories, replication volume, and complexity growth.
//!
//! The crate is organised around two engines plus shared plumbing:
//!
//! - [`nonspatial`] — the multiset model: a well-mixed population evolving
//!   through pairwise competitions, carrying-capacity death, and a three-part
//!   mutation sweep.
//! - [`spatial`] — the particle-in-unit-square baseline with neighborhood
//!   group selection and a density limit.
//! - [`fitness`] — canonical byte encoding, the 64-bit FNV-1a hash, and the
//!   `(h mod m) / m` fitness mapping shared by both engines.
//! - [`rng`] — the pinned random-number contract every stochastic operation
//!   draws from; replaying a `(seed, run_index)` pair replays a run exactly.
//! - [`eventlog`] — JSON-lines persistence of replication events and step
//!   summaries, byte-identical across repeated runs.
//! - [`analysis`] — per-step aggregates, the `-log10(1 - f)` closeness
//!   transform, cross-run averaging, diversity counters, and bounded vs
//!   unbounded growth fits compared by AIC/BIC.
//!
//! Numeric code is generic over [`scalar::Real`] (`f32` or `f64`); the
//! concrete aliases below fix the scalar the binaries use. Fitness itself is
//! kept in exact integer form (`numerator / modulus`) so that equality,
//! ordering, and serialization never depend on floating-point rounding.

pub mod analysis;
pub mod config;
pub mod error;
pub mod eventlog;
pub mod fitness;
pub mod nonspatial;
pub mod rng;
pub mod scalar;
pub mod spatial;
pub mod types;

pub use error::{Error, Result};
pub use scalar::Real;

/// Scalar type used by the command-line tools and the default aliases.
pub type Scalar = f64;

/// [`config::SimConfig`] at the default scalar.
pub type DefaultSimConfig = config::SimConfig<Scalar>;

/// [`config::SpatialConfig`] at the default scalar.
pub type DefaultSpatialConfig = config::SpatialConfig<Scalar>;
