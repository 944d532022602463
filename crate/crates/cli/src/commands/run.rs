use std::path::{Path, PathBuf};

use hashchem_core::config::SpatialConfig;
use hashchem_core::eventlog::{log_file_path, Header, LogFileWriter, ModelKind};
use hashchem_core::nonspatial::StepSummary;
use hashchem_core::{nonspatial, spatial, Scalar};

use crate::args::RunArgs;
use crate::error::CliError;

/// Executes one run and writes its log. Shared with `batch`.
pub fn write_one_log(
    model: ModelKind,
    cfg: &SpatialConfig<Scalar>,
    run_id: u64,
    out_dir: &Path,
    gzip: bool,
) -> Result<(PathBuf, Vec<StepSummary>), CliError> {
    let seed = cfg.base.seed;
    let path = log_file_path(out_dir, model, seed, run_id, gzip);
    let mut writer = LogFileWriter::create(&path)?;
    let summaries = match model {
        ModelKind::Nonspatial => {
            writer.header(&Header::new(model, seed, run_id, &cfg.base)?)?;
            nonspatial::run(&cfg.base, run_id, &mut writer)?
        }
        ModelKind::Spatial => {
            writer.header(&Header::new(model, seed, run_id, cfg)?)?;
            spatial::run_spatial(cfg, run_id, &mut writer)?
        }
    };
    writer.finish()?;
    Ok((path, summaries))
}

pub fn execute(args: &RunArgs) -> Result<(), CliError> {
    let cfg = args.config.resolve()?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", args.out.display())))?;

    let model: ModelKind = args.model.into();
    let (path, summaries) = write_one_log(model, &cfg, args.run_id, &args.out, args.gzip)?;
    println!("wrote {}", path.display());
    match summaries.last() {
        Some(s) => println!(
            "final step: t={} n={} matches={} births={} deaths={} mutated={}",
            s.t, s.population_size, s.matches, s.births, s.deaths, s.mutated_multisets
        ),
        None => println!("no steps executed (iterations = 0)"),
    }
    Ok(())
}
