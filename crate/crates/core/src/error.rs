//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field violated its bound. `field` names the first
    /// offender so callers can report it precisely.
    #[error("invalid config: {field}: {reason}")]
    InvalidConfig {
        field: &'static str,
        reason: String,
    },

    #[error("entity type {value} outside [1, {s_max}]")]
    EntityOutOfRange { value: u32, s_max: u32 },

    #[error("a multiset must contain at least one element")]
    EmptyMultiset,

    #[error("population has {n} members, operation needs at least {need}")]
    PopulationTooSmall { n: usize, need: usize },

    /// Sanity ceiling: replication may transiently exceed the carrying
    /// capacity, but blowing past `bound` means the dynamics are broken.
    #[error("population size {n} exceeded sanity bound {bound}")]
    PopulationOverflow { n: usize, bound: usize },

    #[error("fitness numerator {num} must be below modulus {m}")]
    InvalidFitness { num: u64, m: u64 },

    #[error("closeness transform requires fitness below 1")]
    FitnessAboveOne,

    #[error("events not sorted by step: t={next} after t={prev}")]
    UnsortedEvents { prev: u32, next: u32 },

    #[error("unknown config key: {key}")]
    UnknownConfigKey { key: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("fit needs at least {need} defined points, found {found}")]
    InsufficientData { need: usize, found: usize },

    #[error("fit range [{lo}, {hi}] invalid: {reason}")]
    InvalidFitRange { lo: u32, hi: u32, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
