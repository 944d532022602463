use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hashchem_core::analysis::fit::{compare_models, FitGrid, ModelComparison};
use hashchem_core::analysis::{
    self, cross_run_mean, MeanSeries, RunAccumulator, RunAnalysis, TransformOrder,
};
use hashchem_core::eventlog::{open_log, Record};
use hashchem_core::Scalar;

use crate::args::AnalyzeArgs;
use crate::error::CliError;

fn parse_fit_range(text: &str) -> Result<(u32, u32), CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("--fit-range expects `lo:hi`, got {text:?}")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad fit range bound {lo:?}")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad fit range bound {hi:?}")))?;
    Ok((lo, hi))
}

/// Streams one log into a per-run analysis, padded to the iteration count
/// recorded in its header.
fn analyze_log(path: &Path) -> Result<RunAnalysis<Scalar>, CliError> {
    let mut acc = RunAccumulator::<Scalar>::new();
    let mut iterations: u32 = 0;
    let mut last_t: u32 = 0;
    for record in open_log(path)? {
        match record? {
            Record::Header(h) => {
                iterations = h
                    .config
                    .get("iterations")
                    .and_then(|v| v.as_u64())
                    .unwrap_or(0) as u32;
            }
            Record::Replication(ev) => {
                last_t = last_t.max(ev.t);
                acc.push_event(&ev)?;
            }
            Record::Summary(s) => last_t = last_t.max(s.t),
        }
    }
    Ok(acc.finish(iterations.max(last_t)))
}

fn write_csv(
    dir: &Path,
    name: &str,
    runs: &[Vec<Option<Scalar>>],
    mean: &MeanSeries<Scalar>,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut out = BufWriter::new(File::create(&path)?);
    analysis::write_series_csv(&mut out, runs, mean)?;
    out.flush()?;
    Ok(path)
}

struct SeriesExport {
    file: &'static str,
    extract: fn(&RunAnalysis<Scalar>, TransformOrder) -> Vec<Option<Scalar>>,
}

const EXPORTS: &[SeriesExport] = &[
    SeriesExport {
        file: "fig2_max_fitness.csv",
        extract: |run, _| analysis::max_fitness_closeness_series(run),
    },
    SeriesExport {
        file: "fig2_mean_fitness.csv",
        extract: |run, order| analysis::mean_fitness_closeness_series(run, order),
    },
    SeriesExport {
        file: "fig3_replicated_individuals.csv",
        extract: |run, _| analysis::replicated_individuals_series(run),
    },
    SeriesExport {
        file: "fig4_max_size.csv",
        extract: |run, _| analysis::max_size_series(run),
    },
    SeriesExport {
        file: "fig4_mean_size.csv",
        extract: |run, _| analysis::mean_size_series(run),
    },
    SeriesExport {
        file: "fig6_individual_types.csv",
        extract: |run, _| analysis::unique_individual_series(run),
    },
    SeriesExport {
        file: "fig6_multiset_types.csv",
        extract: |run, _| analysis::unique_multiset_series(run),
    },
];

pub fn execute(args: &AnalyzeArgs) -> Result<(), CliError> {
    let fit_range = parse_fit_range(&args.fit_range)?;
    let grid = if args.log_resample {
        FitGrid::LogResample(args.resample_points)
    } else {
        FitGrid::Full
    };
    let order = if args.transform_first {
        TransformOrder::TransformFirst
    } else {
        TransformOrder::TransformLast
    };

    let mut paths: Vec<PathBuf> = glob::glob(&args.logs)
        .map_err(|e| CliError::usage(format!("bad glob {:?}: {e}", args.logs)))?
        .filter_map(|entry| entry.ok())
        .collect();
    paths.sort();

    // fixed run ordering: lexicographic by path
    let mut analyses: Vec<RunAnalysis<Scalar>> = Vec::new();
    for path in &paths {
        match analyze_log(path) {
            Ok(a) => analyses.push(a),
            Err(e) => eprintln!("skipping {}: {e}", path.display()),
        }
    }
    if analyses.is_empty() {
        return Err(CliError::usage(format!(
            "no parseable logs matched {:?}",
            args.logs
        )));
    }
    if analyses.len() < 10 {
        println!("note: low sample, only {} run(s)", analyses.len());
    }

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", args.out.display())))?;

    for export in EXPORTS {
        let runs: Vec<Vec<Option<Scalar>>> =
            analyses.iter().map(|a| (export.extract)(a, order)).collect();
        let mean = cross_run_mean(&runs);
        let path = write_csv(&args.out, export.file, &runs, &mean)?;
        println!("wrote {}", path.display());
    }

    let max_size: Vec<_> = analyses.iter().map(analysis::max_size_series).collect();
    let mean_size: Vec<_> = analyses.iter().map(analysis::mean_size_series).collect();
    let max_size_cmp = compare_models(&cross_run_mean(&max_size).mean, fit_range, grid)?;
    let mean_size_cmp = compare_models(&cross_run_mean(&mean_size).mean, fit_range, grid)?;

    print_comparison("max_size", &max_size_cmp);
    print_comparison("mean_size", &mean_size_cmp);

    let report = serde_json::json!({
        "fit_range": [fit_range.0, fit_range.1],
        "grid": if args.log_resample {
            serde_json::json!({ "log_resample": args.resample_points })
        } else {
            serde_json::json!("full")
        },
        "runs": analyses.len(),
        "series": {
            "max_size": max_size_cmp,
            "mean_size": mean_size_cmp,
        },
    });
    let report_path = args.out.join("fit_report.json");
    let mut out = BufWriter::new(File::create(&report_path)?);
    serde_json::to_writer_pretty(&mut out, &report)
        .map_err(|e| CliError::io(format!("cannot write report: {e}")))?;
    out.write_all(b"\n")?;
    out.flush()?;
    println!("wrote {}", report_path.display());
    Ok(())
}

fn print_comparison(name: &str, cmp: &ModelComparison<Scalar>) {
    println!(
        "{name}: verdict={:?} unbounded(a={:.5}, b={:.5}, aic={:.3}) bounded(a={:.5}, b={:.5}, aic={:.3}) dAIC={:.3} dBIC={:.3}",
        cmp.verdict,
        cmp.unbounded.a,
        cmp.unbounded.b,
        cmp.unbounded.aic,
        cmp.bounded.a,
        cmp.bounded.b,
        cmp.bounded.aic,
        cmp.delta_aic,
        cmp.delta_bic
    );
}
