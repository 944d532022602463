//! Simulation configuration for both engines, plus the flat key-value file
//! format the CLI loads configs from. Keys in that file match the field
//! names below exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parameters of the multiset (non-spatial) model. Probabilities are carried
/// in the scalar type `R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<R> {
    /// Size of the possibility set: entity types are `1..=s_max`.
    pub s_max: u32,
    /// Carrying capacity of the environment.
    pub n_max: u32,
    /// Number of time steps per run.
    pub iterations: u32,
    /// Fitness modulus: `f = (h mod m) / m`.
    pub m: u64,
    /// Number of singleton multisets in the initial population.
    pub init_count: u32,
    /// Per-multiset probability of entering the mutation sweep each step.
    pub mutation_rate: R,
    /// Per-element probability of a point change inside the sweep.
    pub point_change_prob: R,
    /// Fraction of point changes that are type swaps (the rest delete).
    pub swap_fraction: R,
    /// Probability that the multiset's content is duplicated.
    pub duplication_prob: R,
    /// Variant switch: pass the replicated copy through the mutation
    /// operator before insertion.
    pub mutate_on_replicate: bool,
    /// Base seed; combined with a run index to derive each run's stream.
    pub seed: u64,
}

impl<R: Real> Default for SimConfig<R> {
    fn default() -> Self {
        SimConfig {
            s_max: 1000,
            n_max: 10_000,
            iterations: 2000,
            m: 100_000_000,
            init_count: 10,
            mutation_rate: R::from_f64_lossy(0.01),
            point_change_prob: R::from_f64_lossy(0.20),
            swap_fraction: R::from_f64_lossy(0.80),
            duplication_prob: R::from_f64_lossy(0.20),
            mutate_on_replicate: false,
            seed: 0,
        }
    }
}

fn check_probability<R: Real>(field: &'static str, value: R) -> Result<()> {
    if !(value >= R::zero() && value <= R::one()) {
        return Err(Error::InvalidConfig {
            field,
            reason: format!("{value} not in [0, 1]"),
        });
    }
    Ok(())
}

fn check_positive(field: &'static str, value: u64) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidConfig {
            field,
            reason: "must be positive".into(),
        });
    }
    Ok(())
}

impl<R: Real> SimConfig<R> {
    /// Checks every invariant, reporting the first violated field.
    /// `iterations` may be zero (an empty run is well-defined).
    pub fn validate(&self) -> Result<()> {
        check_positive("s_max", self.s_max as u64)?;
        check_positive("n_max", self.n_max as u64)?;
        if self.m < 2 {
            return Err(Error::InvalidConfig {
                field: "m",
                reason: format!("{} < 2", self.m),
            });
        }
        check_positive("init_count", self.init_count as u64)?;
        check_probability("mutation_rate", self.mutation_rate)?;
        check_probability("point_change_prob", self.point_change_prob)?;
        check_probability("swap_fraction", self.swap_fraction)?;
        check_probability("duplication_prob", self.duplication_prob)?;
        Ok(())
    }

    /// Validating pass-through, convenient in builder-style call chains.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Hard sanity ceiling on the population size.
    pub fn population_bound(&self) -> usize {
        4 * self.n_max as usize
    }

    /// Sets one field by its key name.
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "s_max" => self.s_max = parse_int("s_max", value)?,
            "n_max" => self.n_max = parse_int("n_max", value)?,
            "iterations" => self.iterations = parse_int("iterations", value)?,
            "m" => self.m = parse_int("m", value)?,
            "init_count" => self.init_count = parse_int("init_count", value)?,
            "mutation_rate" => self.mutation_rate = parse_real("mutation_rate", value)?,
            "point_change_prob" => self.point_change_prob = parse_real("point_change_prob", value)?,
            "swap_fraction" => self.swap_fraction = parse_real("swap_fraction", value)?,
            "duplication_prob" => self.duplication_prob = parse_real("duplication_prob", value)?,
            "mutate_on_replicate" => {
                self.mutate_on_replicate = parse_bool("mutate_on_replicate", value)?
            }
            "seed" => self.seed = parse_int("seed", value)?,
            _ => return Err(Error::UnknownConfigKey { key: key.into() }),
        }
        Ok(())
    }

    /// Parses a flat key-value config (`key = value`, `#` comments) on top
    /// of the defaults.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (key, value) in parse_kv_lines(text)? {
            cfg.apply_key(&key, &value)?;
        }
        Ok(cfg)
    }
}

/// Parameters of the spatial baseline. Extends [`SimConfig`]; the flattened
/// representation keeps a single flat key namespace in config files and log
/// headers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialConfig<R> {
    #[serde(flatten)]
    pub base: SimConfig<R>,
    /// Maximum neighborhood density: replication probability carries the
    /// factor `1 - |N| / d_max`.
    pub d_max: u32,
    /// Euclidean radius defining "close distance" (boundary inclusive).
    pub neighbor_radius: R,
    /// Standard deviation of the per-coordinate movement perturbation.
    pub move_sigma: R,
    /// Per-particle probability of a type resample each step.
    pub point_mutation_prob: R,
    /// Fitness modulus for the spatial model.
    pub m_spatial: u64,
}

impl<R: Real> Default for SpatialConfig<R> {
    fn default() -> Self {
        SpatialConfig {
            base: SimConfig::default(),
            d_max: 100,
            neighbor_radius: R::from_f64_lossy(0.05),
            move_sigma: R::from_f64_lossy(0.01),
            point_mutation_prob: R::from_f64_lossy(0.001),
            m_spatial: 100_000,
        }
    }
}

impl<R: Real> SpatialConfig<R> {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        check_positive("d_max", self.d_max as u64)?;
        if !(self.neighbor_radius > R::zero() && self.neighbor_radius < R::one()) {
            return Err(Error::InvalidConfig {
                field: "neighbor_radius",
                reason: format!("{} not in (0, 1)", self.neighbor_radius),
            });
        }
        if !(self.move_sigma >= R::zero() && self.move_sigma.is_finite()) {
            return Err(Error::InvalidConfig {
                field: "move_sigma",
                reason: format!("{} not a finite non-negative value", self.move_sigma),
            });
        }
        check_probability("point_mutation_prob", self.point_mutation_prob)?;
        if self.m_spatial < 2 {
            return Err(Error::InvalidConfig {
                field: "m_spatial",
                reason: format!("{} < 2", self.m_spatial),
            });
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "d_max" => self.d_max = parse_int("d_max", value)?,
            "neighbor_radius" => self.neighbor_radius = parse_real("neighbor_radius", value)?,
            "move_sigma" => self.move_sigma = parse_real("move_sigma", value)?,
            "point_mutation_prob" => {
                self.point_mutation_prob = parse_real("point_mutation_prob", value)?
            }
            "m_spatial" => self.m_spatial = parse_int("m_spatial", value)?,
            _ => self.base.apply_key(key, value)?,
        }
        Ok(())
    }

    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (key, value) in parse_kv_lines(text)? {
            cfg.apply_key(&key, &value)?;
        }
        Ok(cfg)
    }
}

fn parse_int<T: std::str::FromStr>(field: &'static str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::InvalidConfig {
        field,
        reason: format!("cannot parse {value:?} as an integer"),
    })
}

fn parse_real<R: Real>(field: &'static str, value: &str) -> Result<R> {
    let v: f64 = value.trim().parse().map_err(|_| Error::InvalidConfig {
        field,
        reason: format!("cannot parse {value:?} as a number"),
    })?;
    Ok(R::from_f64_lossy(v))
}

fn parse_bool(field: &'static str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        other => Err(Error::InvalidConfig {
            field,
            reason: format!("cannot parse {other:?} as a boolean"),
        }),
    }
}

/// Splits `key = value` lines, ignoring blank lines and `#` comments.
pub fn parse_kv_lines(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            reason: format!("expected `key = value`, got {raw:?}"),
        })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}
