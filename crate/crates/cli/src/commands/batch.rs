use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use hashchem_core::eventlog::ModelKind;

use crate::args::BatchArgs;
use crate::commands::run::write_one_log;
use crate::error::CliError;

/// Runs `--runs` independent simulations with run indices `0..N`. Each run
/// derives its own RNG stream and writes its own file, so the results are
/// identical for any `--jobs` value. On partial failure the completed files
/// are kept and the first error is reported.
pub fn execute(args: &BatchArgs) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::usage("--runs must be at least 1"));
    }
    if args.jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    let cfg = args.config.resolve()?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", args.out.display())))?;

    let model: ModelKind = args.model.into();
    let next_run = AtomicU64::new(0);
    let failures: Mutex<Vec<(u64, CliError)>> = Mutex::new(Vec::new());
    let workers = args.jobs.min(args.runs as usize);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let run_id = next_run.fetch_add(1, Ordering::Relaxed);
                if run_id >= args.runs {
                    break;
                }
                if let Err(e) = write_one_log(model, &cfg, run_id, &args.out, args.gzip) {
                    failures.lock().unwrap().push((run_id, e));
                }
            });
        }
    });

    let mut failures = failures.into_inner().unwrap();
    if failures.is_empty() {
        println!(
            "wrote {} {} log(s) to {}",
            args.runs,
            model,
            args.out.display()
        );
        Ok(())
    } else {
        failures.sort_by_key(|(run_id, _)| *run_id);
        for (run_id, e) in &failures {
            eprintln!("run {run_id} failed: {e}");
        }
        let completed = args.runs - failures.len() as u64;
        let (run_id, first) = failures.remove(0);
        Err(match first {
            CliError::Usage(msg) => {
                CliError::usage(format!("run {run_id} failed ({completed} completed): {msg}"))
            }
            CliError::Io(msg) => {
                CliError::io(format!("run {run_id} failed ({completed} completed): {msg}"))
            }
        })
    }
}
