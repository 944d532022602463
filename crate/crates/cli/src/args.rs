//! Argument definitions. Config values resolve in three layers: built-in
//! defaults, then the `--config` key-value file, then individual flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hashchem_core::config::SpatialConfig;
use hashchem_core::eventlog::ModelKind;
use hashchem_core::Scalar;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hashchem", version, about = "Multiset evolution simulator with a hash fitness landscape")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute one simulation run and write its event log.
    Run(RunArgs),
    /// Execute N independent runs, optionally in parallel.
    Batch(BatchArgs),
    /// Time full runs of each model with logging disabled.
    Bench(BenchArgs),
    /// Aggregate event logs into figure CSVs and a growth-fit report.
    Analyze(AnalyzeArgs),
    /// Render one figure CSV as a static SVG chart.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Nonspatial,
    Spatial,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> ModelKind {
        match m {
            ModelArg::Nonspatial => ModelKind::Nonspatial,
            ModelArg::Spatial => ModelKind::Spatial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelsArg {
    Both,
    Nonspatial,
    Spatial,
}

/// Config file plus per-field overrides; keys match the config file's.
#[derive(Debug, Args, Default, Clone)]
pub struct ConfigArgs {
    /// Flat key-value config file (`key = value`, `#` comments).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub iterations: Option<u32>,
    #[arg(long)]
    pub s_max: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub init_count: Option<u32>,
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    #[arg(long)]
    pub point_change_prob: Option<f64>,
    #[arg(long)]
    pub swap_fraction: Option<f64>,
    #[arg(long)]
    pub duplication_prob: Option<f64>,
    #[arg(long)]
    pub mutate_on_replicate: Option<bool>,
    #[arg(long)]
    pub d_max: Option<u32>,
    #[arg(long)]
    pub neighbor_radius: Option<f64>,
    #[arg(long)]
    pub move_sigma: Option<f64>,
    #[arg(long)]
    pub point_mutation_prob: Option<f64>,
    #[arg(long)]
    pub m_spatial: Option<u64>,
}

impl ConfigArgs {
    /// Resolves the full (spatial) configuration; the non-spatial engine
    /// uses its `base`.
    pub fn resolve(&self) -> Result<SpatialConfig<Scalar>, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
                SpatialConfig::from_kv_text(&text)?
            }
            None => SpatialConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.base.seed = v;
        }
        if let Some(v) = self.iterations {
            cfg.base.iterations = v;
        }
        if let Some(v) = self.s_max {
            cfg.base.s_max = v;
        }
        if let Some(v) = self.n_max {
            cfg.base.n_max = v;
        }
        if let Some(v) = self.m {
            cfg.base.m = v;
        }
        if let Some(v) = self.init_count {
            cfg.base.init_count = v;
        }
        if let Some(v) = self.mutation_rate {
            cfg.base.mutation_rate = v;
        }
        if let Some(v) = self.point_change_prob {
            cfg.base.point_change_prob = v;
        }
        if let Some(v) = self.swap_fraction {
            cfg.base.swap_fraction = v;
        }
        if let Some(v) = self.duplication_prob {
            cfg.base.duplication_prob = v;
        }
        if let Some(v) = self.mutate_on_replicate {
            cfg.base.mutate_on_replicate = v;
        }
        if let Some(v) = self.d_max {
            cfg.d_max = v;
        }
        if let Some(v) = self.neighbor_radius {
            cfg.neighbor_radius = v;
        }
        if let Some(v) = self.move_sigma {
            cfg.move_sigma = v;
        }
        if let Some(v) = self.point_mutation_prob {
            cfg.point_mutation_prob = v;
        }
        if let Some(v) = self.m_spatial {
            cfg.m_spatial = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Parser)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "nonspatial")]
    pub model: ModelArg,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Output directory for the log file.
    #[arg(long, env = "HASHCHEM_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Compress the log with gzip on write.
    #[arg(long)]
    pub gzip: bool,
    /// Run index; selects the RNG stream and names the file.
    #[arg(long, default_value_t = 0)]
    pub run_id: u64,
}

#[derive(Debug, Parser)]
pub struct BatchArgs {
    /// Number of independent runs (run indices 0..N-1).
    #[arg(long)]
    pub runs: u64,
    /// Worker threads; output is identical regardless.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "nonspatial")]
    pub model: ModelArg,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, env = "HASHCHEM_OUT", default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub gzip: bool,
}

#[derive(Debug, Parser)]
pub struct BenchArgs {
    /// Timed runs per model.
    #[arg(long, default_value_t = 20)]
    pub runs: u64,
    #[arg(long, value_enum, default_value = "both")]
    pub models: ModelsArg,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Parser)]
pub struct AnalyzeArgs {
    /// Glob selecting the input logs, e.g. `out/nonspatial_1_*.jsonl`.
    #[arg(long)]
    pub logs: String,
    /// Output directory for CSVs and the fit report.
    #[arg(long, env = "HASHCHEM_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Fit range as `lo:hi` (inclusive).
    #[arg(long, default_value = "100:2000")]
    pub fit_range: String,
    /// Fit on log-spaced abscissae instead of the full integer grid.
    #[arg(long)]
    pub log_resample: bool,
    /// Number of log-spaced points when `--log-resample` is set.
    #[arg(long, default_value_t = 101)]
    pub resample_points: usize,
    /// Average per-event transformed fitness instead of transforming the
    /// per-step mean.
    #[arg(long)]
    pub transform_first: bool,
}

#[derive(Debug, Parser)]
pub struct PlotArgs {
    /// Input CSV produced by `analyze`.
    #[arg(long)]
    pub csv: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    pub out: PathBuf,
    /// Logarithmic time axis.
    #[arg(long)]
    pub log_time: bool,
}
