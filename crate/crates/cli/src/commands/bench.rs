use std::time::{Duration, Instant};

use hashchem_core::config::SpatialConfig;
use hashchem_core::eventlog::{ModelKind, NullSink};
use hashchem_core::{nonspatial, spatial, Scalar};

use crate::args::{BenchArgs, ModelsArg};
use crate::error::CliError;

/// Wall-clock distribution over the included runs.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub model: ModelKind,
    pub runs: u64,
    pub excluded_extinct: u64,
    pub included: Vec<Duration>,
}

impl BenchReport {
    pub fn mean(&self) -> Option<Duration> {
        if self.included.is_empty() {
            return None;
        }
        Some(self.included.iter().sum::<Duration>() / self.included.len() as u32)
    }

    pub fn median(&self) -> Option<Duration> {
        if self.included.is_empty() {
            return None;
        }
        let mut sorted = self.included.clone();
        sorted.sort();
        Some(sorted[sorted.len() / 2])
    }

    fn print(&self) {
        println!(
            "model {}: runs {}, excluded {} (extinct), included {}",
            self.model,
            self.runs,
            self.excluded_extinct,
            self.included.len()
        );
        if self.included.is_empty() {
            println!("  no surviving runs to time");
            return;
        }
        let min = self.included.iter().min().unwrap();
        let max = self.included.iter().max().unwrap();
        println!(
            "  min {:.3}s  median {:.3}s  mean {:.3}s  max {:.3}s",
            min.as_secs_f64(),
            self.median().unwrap().as_secs_f64(),
            self.mean().unwrap().as_secs_f64(),
            max.as_secs_f64()
        );
    }
}

/// Times full runs of one model with logging disabled. Runs that go extinct
/// before completing the iteration budget are excluded from the distribution
/// and reported separately. Runs execute sequentially on one thread.
pub fn time_model(
    model: ModelKind,
    cfg: &SpatialConfig<Scalar>,
    runs: u64,
) -> Result<BenchReport, CliError> {
    let mut included = Vec::new();
    let mut excluded = 0;
    for run_id in 0..runs {
        let mut sink = NullSink;
        let start = Instant::now();
        let summaries = match model {
            ModelKind::Nonspatial => nonspatial::run(&cfg.base, run_id, &mut sink)?,
            ModelKind::Spatial => spatial::run_spatial(cfg, run_id, &mut sink)?,
        };
        let elapsed = start.elapsed();
        let extinct = summaries
            .last()
            .is_some_and(|s| s.population_size == 0);
        if extinct {
            excluded += 1;
        } else {
            included.push(elapsed);
        }
    }
    Ok(BenchReport {
        model,
        runs,
        excluded_extinct: excluded,
        included,
    })
}

pub fn execute(args: &BenchArgs) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::usage("--runs must be at least 1"));
    }
    let cfg = args.config.resolve()?;
    println!(
        "timing {} run(s) of {} iterations per model, logging disabled",
        args.runs, cfg.base.iterations
    );

    let spatial_report = match args.models {
        ModelsArg::Both | ModelsArg::Spatial => {
            let report = time_model(ModelKind::Spatial, &cfg, args.runs)?;
            report.print();
            Some(report)
        }
        ModelsArg::Nonspatial => None,
    };
    let nonspatial_report = match args.models {
        ModelsArg::Both | ModelsArg::Nonspatial => {
            let report = time_model(ModelKind::Nonspatial, &cfg, args.runs)?;
            report.print();
            Some(report)
        }
        ModelsArg::Spatial => None,
    };

    if let (Some(sp), Some(ns)) = (&spatial_report, &nonspatial_report) {
        match (sp.mean(), ns.mean()) {
            (Some(sp_mean), Some(ns_mean)) if ns_mean.as_secs_f64() > 0.0 => {
                println!(
                    "speed-up (spatial mean / nonspatial mean): {:.2}x",
                    sp_mean.as_secs_f64() / ns_mean.as_secs_f64()
                );
            }
            _ => println!("speed-up: not available (a distribution is empty)"),
        }
    }
    Ok(())
}
