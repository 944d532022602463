//! Post-processing of replication-event streams: per-step aggregates, the
//! `-log10(1 - fitness)` closeness transform, cross-run averaging, cumulative
//! diversity counters, growth-model fitting, and the tidy CSV exports the
//! plotting command consumes.
//!
//! Per-step statistics (max/mean fitness, max/mean multiset size) are
//! undefined on steps with no replication event and are excluded from means
//! rather than imputed; the per-step count of replicated individuals is a
//! sum and is simply zero on such steps.

pub mod fit;

use std::collections::HashSet;
use std::io::Write;

use crate::error::{Error, Result};
use crate::eventlog::{ReplicationEvent, Sink};
use crate::fitness::FitnessValue;
use crate::nonspatial::StepSummary;
use crate::scalar::Real;
use crate::types::Multiset;

/// Statistics of one time step's replication events.
#[derive(Debug, Clone, PartialEq)]
pub struct StepAggregate<R> {
    pub t: u32,
    pub event_count: usize,
    /// Total individuals involved in replications: the sum of multiset sizes
    /// over the step's events (zero when none occurred).
    pub replicated_individuals: u64,
    pub max_fitness: Option<FitnessValue>,
    pub mean_fitness: Option<R>,
    /// Mean of per-event `-log10(1 - f)` values (the transform-first
    /// averaging variant).
    pub mean_fitness_neglog: Option<R>,
    pub max_size: Option<usize>,
    pub mean_size: Option<R>,
}

impl<R: Real> StepAggregate<R> {
    fn empty(t: u32) -> Self {
        StepAggregate {
            t,
            event_count: 0,
            replicated_individuals: 0,
            max_fitness: None,
            mean_fitness: None,
            mean_fitness_neglog: None,
            max_size: None,
            mean_size: None,
        }
    }
}

/// `-log10(1 - f)` for a scalar fitness in `[0, 1)`. The exact fixed-point
/// variant lives on [`FitnessValue::neglog10_closeness`].
pub fn neglog_transform<R: Real>(f: R) -> Result<R> {
    if f >= R::one() || f < R::zero() {
        return Err(Error::FitnessAboveOne);
    }
    Ok(-(R::one() - f).log10())
}

struct OpenStep<R> {
    t: u32,
    count: usize,
    individuals: u64,
    sum_fitness: R,
    sum_neglog: R,
    max_fitness: FitnessValue,
    sum_size: u64,
    max_size: usize,
}

/// Streaming accumulator for one run's events; also tracks the cumulative
/// numbers of distinct individual types and distinct multiset types seen in
/// replications.
pub struct RunAccumulator<R> {
    sealed: Vec<StepAggregate<R>>,
    unique_individual: Vec<u32>,
    unique_multiset: Vec<u32>,
    open: Option<OpenStep<R>>,
    seen_types: HashSet<u32>,
    seen_multisets: HashSet<Multiset>,
}

impl<R: Real> Default for RunAccumulator<R> {
    fn default() -> Self {
        RunAccumulator {
            sealed: Vec::new(),
            unique_individual: Vec::new(),
            unique_multiset: Vec::new(),
            open: None,
            seen_types: HashSet::new(),
            seen_multisets: HashSet::new(),
        }
    }
}

impl<R: Real> RunAccumulator<R> {
    pub fn new() -> Self {
        Self::default()
    }

    fn seal_through(&mut self, t: u32) {
        if let Some(open) = self.open.take() {
            let count = R::from_usize_lossy(open.count);
            self.sealed.push(StepAggregate {
                t: open.t,
                event_count: open.count,
                replicated_individuals: open.individuals,
                max_fitness: Some(open.max_fitness),
                mean_fitness: Some(open.sum_fitness / count),
                mean_fitness_neglog: Some(open.sum_neglog / count),
                max_size: Some(open.max_size),
                mean_size: Some(R::from_f64_lossy(open.sum_size as f64) / count),
            });
            self.unique_individual.push(self.seen_types.len() as u32);
            self.unique_multiset.push(self.seen_multisets.len() as u32);
        }
        while (self.sealed.len() as u32) < t {
            let step = self.sealed.len() as u32 + 1;
            self.sealed.push(StepAggregate::empty(step));
            self.unique_individual.push(self.seen_types.len() as u32);
            self.unique_multiset.push(self.seen_multisets.len() as u32);
        }
    }

    pub fn push_event(&mut self, ev: &ReplicationEvent) -> Result<()> {
        if ev.t == 0 {
            return Err(Error::UnsortedEvents { prev: 0, next: 0 });
        }
        let current_t = match &self.open {
            Some(open) => open.t,
            None => self.sealed.len() as u32,
        };
        if ev.t < current_t {
            return Err(Error::UnsortedEvents {
                prev: current_t,
                next: ev.t,
            });
        }
        if self.open.as_ref().map(|o| o.t) != Some(ev.t) {
            self.seal_through(ev.t - 1);
            self.open = Some(OpenStep {
                t: ev.t,
                count: 0,
                individuals: 0,
                sum_fitness: R::zero(),
                sum_neglog: R::zero(),
                max_fitness: ev.fitness,
                sum_size: 0,
                max_size: 0,
            });
        }

        for v in ev.multiset.values() {
            self.seen_types.insert(v);
        }
        self.seen_multisets.insert(ev.multiset.clone());

        let open = self.open.as_mut().expect("opened above");
        let size = ev.multiset.size();
        open.count += 1;
        open.individuals += size as u64;
        open.sum_fitness = open.sum_fitness + ev.fitness.value::<R>();
        open.sum_neglog = open.sum_neglog + ev.fitness.neglog10_closeness::<R>();
        if ev.fitness.value_cmp(open.max_fitness) == std::cmp::Ordering::Greater {
            open.max_fitness = ev.fitness;
        }
        open.sum_size += size as u64;
        open.max_size = open.max_size.max(size);
        Ok(())
    }

    /// Seals everything and pads empty steps out to `iterations`.
    pub fn finish(mut self, iterations: u32) -> RunAnalysis<R> {
        let last_open = self.open.as_ref().map(|o| o.t).unwrap_or(0);
        self.seal_through(last_open.max(iterations));
        RunAnalysis {
            aggregates: self.sealed,
            unique_individual_types: self.unique_individual,
            unique_multiset_types: self.unique_multiset,
        }
    }
}

/// Everything the figures need from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAnalysis<R> {
    /// One aggregate per step, `t = 1..=iterations`.
    pub aggregates: Vec<StepAggregate<R>>,
    /// Cumulative distinct individual types through each step.
    pub unique_individual_types: Vec<u32>,
    /// Cumulative distinct multiset types through each step.
    pub unique_multiset_types: Vec<u32>,
}

/// A sink that aggregates in memory as the run produces events, avoiding any
/// intermediate file. Step summaries are retained as well.
pub struct AggregatingSink<R: Real> {
    accumulator: RunAccumulator<R>,
    pub summaries: Vec<StepSummary>,
}

impl<R: Real> Default for AggregatingSink<R> {
    fn default() -> Self {
        AggregatingSink {
            accumulator: RunAccumulator::new(),
            summaries: Vec::new(),
        }
    }
}

impl<R: Real> AggregatingSink<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn finish(self, iterations: u32) -> (RunAnalysis<R>, Vec<StepSummary>) {
        (self.accumulator.finish(iterations), self.summaries)
    }
}

impl<R: Real> Sink for AggregatingSink<R> {
    fn event(&mut self, ev: &ReplicationEvent) -> Result<()> {
        self.accumulator.push_event(ev)
    }
    fn summary(&mut self, s: &StepSummary) -> Result<()> {
        self.summaries.push(*s);
        Ok(())
    }
}

/// Aggregates a sorted event slice into per-step statistics over
/// `t = 1..=iterations`. Errors when the input is not sorted by `t`.
pub fn aggregate_run<R: Real>(
    events: &[ReplicationEvent],
    iterations: u32,
) -> Result<Vec<StepAggregate<R>>> {
    let mut acc = RunAccumulator::new();
    for ev in events {
        acc.push_event(ev)?;
    }
    Ok(acc.finish(iterations).aggregates)
}

/// Cumulative count of distinct individual entity types appearing in any
/// replicated multiset through each step.
pub fn cumulative_unique_individual_types(
    events: &[ReplicationEvent],
    iterations: u32,
) -> Result<Vec<u32>> {
    let mut acc = RunAccumulator::<f64>::new();
    for ev in events {
        acc.push_event(ev)?;
    }
    Ok(acc.finish(iterations).unique_individual_types)
}

/// Cumulative count of distinct canonical multisets appearing in
/// replications through each step.
pub fn cumulative_unique_multiset_types(
    events: &[ReplicationEvent],
    iterations: u32,
) -> Result<Vec<u32>> {
    let mut acc = RunAccumulator::<f64>::new();
    for ev in events {
        acc.push_event(ev)?;
    }
    Ok(acc.finish(iterations).unique_multiset_types)
}

/// Per-step arithmetic mean across runs, over runs with a defined value at
/// that step; `contributing` records how many runs entered each mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSeries<R> {
    pub mean: Vec<Option<R>>,
    pub contributing: Vec<usize>,
}

pub fn cross_run_mean<R: Real>(series: &[Vec<Option<R>>]) -> MeanSeries<R> {
    let len = series.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut mean = Vec::with_capacity(len);
    let mut contributing = Vec::with_capacity(len);
    for i in 0..len {
        let mut sum = R::zero();
        let mut count = 0usize;
        for run in series {
            if let Some(Some(v)) = run.get(i) {
                sum = sum + *v;
                count += 1;
            }
        }
        mean.push(if count > 0 {
            Some(sum / R::from_usize_lossy(count))
        } else {
            None
        });
        contributing.push(count);
    }
    MeanSeries { mean, contributing }
}

/// How the mean-fitness curve is transformed: `TransformLast` applies
/// `-log10(1 - f)` to the per-step mean fitness; `TransformFirst` averages
/// per-event transformed values instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformOrder {
    #[default]
    TransformLast,
    TransformFirst,
}

/// Per-step `-log10(1 - max fitness)`, computed on the exact fixed-point
/// representation.
pub fn max_fitness_closeness_series<R: Real>(run: &RunAnalysis<R>) -> Vec<Option<R>> {
    run.aggregates
        .iter()
        .map(|a| a.max_fitness.map(|f| f.neglog10_closeness::<R>()))
        .collect()
}

pub fn mean_fitness_closeness_series<R: Real>(
    run: &RunAnalysis<R>,
    order: TransformOrder,
) -> Vec<Option<R>> {
    run.aggregates
        .iter()
        .map(|a| match order {
            TransformOrder::TransformLast => a.mean_fitness.map(|f| {
                neglog_transform(f).expect("mean of values below 1 stays below 1")
            }),
            TransformOrder::TransformFirst => a.mean_fitness_neglog,
        })
        .collect()
}

/// Individuals involved in replications per step; zero when none occurred.
pub fn replicated_individuals_series<R: Real>(run: &RunAnalysis<R>) -> Vec<Option<R>> {
    run.aggregates
        .iter()
        .map(|a| Some(R::from_f64_lossy(a.replicated_individuals as f64)))
        .collect()
}

pub fn max_size_series<R: Real>(run: &RunAnalysis<R>) -> Vec<Option<R>> {
    run.aggregates
        .iter()
        .map(|a| a.max_size.map(R::from_usize_lossy))
        .collect()
}

pub fn mean_size_series<R: Real>(run: &RunAnalysis<R>) -> Vec<Option<R>> {
    run.aggregates.iter().map(|a| a.mean_size).collect()
}

pub fn unique_individual_series<R: Real>(run: &RunAnalysis<R>) -> Vec<Option<R>> {
    run.unique_individual_types
        .iter()
        .map(|&c| Some(R::from_f64_lossy(c as f64)))
        .collect()
}

pub fn unique_multiset_series<R: Real>(run: &RunAnalysis<R>) -> Vec<Option<R>> {
    run.unique_multiset_types
        .iter()
        .map(|&c| Some(R::from_f64_lossy(c as f64)))
        .collect()
}

/// Writes a tidy per-figure CSV: `t,run_0,...,run_k,mean,n_runs`, one row
/// per step. Undefined entries are left empty.
pub fn write_series_csv<R: Real, W: Write>(
    out: &mut W,
    runs: &[Vec<Option<R>>],
    mean: &MeanSeries<R>,
) -> Result<()> {
    write!(out, "t")?;
    for i in 0..runs.len() {
        write!(out, ",run_{i}")?;
    }
    writeln!(out, ",mean,n_runs")?;
    for (i, mean_value) in mean.mean.iter().enumerate() {
        write!(out, "{}", i + 1)?;
        for run in runs {
            match run.get(i) {
                Some(Some(v)) => write!(out, ",{v}")?,
                _ => write!(out, ",")?,
            }
        }
        match mean_value {
            Some(v) => write!(out, ",{v}")?,
            None => write!(out, ",")?,
        }
        writeln!(out, ",{}", mean.contributing[i])?;
    }
    Ok(())
}
