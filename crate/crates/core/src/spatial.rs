//! The spatial baseline: typed particles in the unit square with cut-off
//! boundaries, neighborhood-sampled group selection, hash fitness, and
//! density-limited replication.
//!
//! Per iteration: every particle moves by a Gaussian perturbation; then each
//! focal position (snapshot taken after movement) builds its neighborhood
//! `N` from the current live set, draws a group size `k` uniform in
//! `{1..|N|}`, samples the group without replacement, and with probability
//! `1/k` evaluates it: the group dies with probability `1 - f`, otherwise it
//! replicates with probability `1 - |N|/d_max` (marginal replication
//! probability `f * (1 - |N|/d_max)`). Insertions and deletions take effect
//! immediately and are visible to subsequent focal evaluations. Afterwards
//! each particle's type is resampled with a small probability and the
//! processing order is shuffled.
//!
//! Draw order per focal position with a non-empty neighborhood: `k`, then
//! `k` sampling draws, then the `1/k` gate, then (if evaluated) the death
//! uniform, then (if surviving) the replication uniform, then two jitter
//! Gaussians per copied member in ascending member order. An empty
//! neighborhood consumes no draws.

use std::collections::HashMap;

use crate::config::SpatialConfig;
use crate::error::Result;
use crate::eventlog::{ReplicationEvent, Sink};
use crate::fitness::fitness;
use crate::nonspatial::StepSummary;
use crate::rng::RngStream;
use crate::scalar::Real;
use crate::types::{EntityType, Multiset};

/// A typed particle at a position in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle<R> {
    pub ptype: EntityType,
    pub x: R,
    pub y: R,
}

/// Clamp to the unit interval (cut-off boundaries).
#[inline]
fn clamp_unit<R: Real>(v: R) -> R {
    v.max(R::zero()).min(R::one())
}

/// Perturbs every coordinate by an independent Gaussian with standard
/// deviation `move_sigma`, clamping to `[0, 1]`. Two draws per particle, x
/// before y, in slice order.
pub fn move_particles<R: Real>(
    particles: &mut [Particle<R>],
    cfg: &SpatialConfig<R>,
    rng: &mut RngStream,
) {
    for p in particles.iter_mut() {
        p.x = clamp_unit(p.x + cfg.move_sigma * R::from_f64_lossy(rng.next_gaussian()));
        p.y = clamp_unit(p.y + cfg.move_sigma * R::from_f64_lossy(rng.next_gaussian()));
    }
}

/// Uniform bucket grid with cell size equal to the search radius, so any
/// radius query touches at most the 3x3 block around the query cell.
pub struct NeighborGrid<R> {
    cell_size: R,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl<R: Real> NeighborGrid<R> {
    pub fn build(particles: &[Particle<R>], cell_size: R) -> Self {
        let mut grid = NeighborGrid {
            cell_size,
            cells: HashMap::new(),
        };
        for (i, p) in particles.iter().enumerate() {
            grid.insert(i, p.x, p.y);
        }
        grid
    }

    #[inline]
    fn cell_of(&self, x: R, y: R) -> (i64, i64) {
        let cx = (x / self.cell_size).floor().to_i64().unwrap_or(0);
        let cy = (y / self.cell_size).floor().to_i64().unwrap_or(0);
        (cx, cy)
    }

    pub fn insert(&mut self, index: usize, x: R, y: R) {
        self.cells.entry(self.cell_of(x, y)).or_default().push(index);
    }

    pub fn remove(&mut self, index: usize, x: R, y: R) {
        let key = self.cell_of(x, y);
        if let Some(bucket) = self.cells.get_mut(&key) {
            if let Some(pos) = bucket.iter().position(|&i| i == index) {
                bucket.swap_remove(pos);
            }
        }
    }

    /// Indices of all particles within Euclidean distance `radius`
    /// (boundary inclusive) of the query point, sorted ascending.
    pub fn neighbors_within(
        &self,
        x: R,
        y: R,
        radius: R,
        particles: &[Particle<R>],
    ) -> Vec<usize> {
        let (cx, cy) = self.cell_of(x, y);
        let r2 = radius * radius;
        let mut found = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &i in bucket {
                        let p = &particles[i];
                        let ddx = p.x - x;
                        let ddy = p.y - y;
                        if ddx * ddx + ddy * ddy <= r2 {
                            found.push(i);
                        }
                    }
                }
            }
        }
        found.sort_unstable();
        found
    }
}

/// Neighborhood of one particle (including itself), via a freshly built
/// grid. The engine builds one grid per iteration instead; this entry point
/// serves spot queries and equivalence tests.
pub fn neighbors<R: Real>(index: usize, particles: &[Particle<R>], radius: R) -> Vec<usize> {
    let grid = NeighborGrid::build(particles, radius);
    grid.neighbors_within(particles[index].x, particles[index].y, radius, particles)
}

/// Uniform `k`-subset of `pool` without replacement (partial Fisher-Yates,
/// exactly `k` index draws), returned sorted ascending.
fn sample_group(pool: &[usize], k: usize, rng: &mut RngStream) -> Vec<usize> {
    debug_assert!(k >= 1 && k <= pool.len());
    let mut scratch = pool.to_vec();
    for i in 0..k {
        let j = i + rng.next_index(scratch.len() - i);
        scratch.swap(i, j);
    }
    scratch.truncate(k);
    scratch.sort_unstable();
    scratch
}

/// One full iteration over the world. Returns the step summary; `matches`
/// counts evaluated groups, `births` replication events, `deaths` group
/// deletions.
pub fn spatial_iteration<R: Real>(
    particles: &mut Vec<Particle<R>>,
    t: u32,
    cfg: &SpatialConfig<R>,
    run_id: u64,
    rng: &mut RngStream,
    sink: &mut dyn Sink,
) -> Result<StepSummary> {
    move_particles(particles, cfg, rng);

    // Focal positions are frozen here; membership changes below are visible
    // to later focal evaluations through the grid.
    let focal: Vec<(R, R)> = particles.iter().map(|p| (p.x, p.y)).collect();
    let mut alive = vec![true; particles.len()];
    let mut grid = NeighborGrid::build(particles, cfg.neighbor_radius);

    let mut matches = 0usize;
    let mut births = 0usize;
    let mut deaths = 0usize;

    for &(fx, fy) in &focal {
        let neighborhood = grid.neighbors_within(fx, fy, cfg.neighbor_radius, particles);
        let n_count = neighborhood.len();
        if n_count == 0 {
            continue;
        }
        let k = 1 + rng.next_index(n_count);
        let group = sample_group(&neighborhood, k, rng);
        let gate = R::from_f64_lossy(rng.next_f64()) < R::one() / R::from_usize_lossy(k);
        if !gate {
            continue;
        }
        matches += 1;

        let group_ms = Multiset::new(group.iter().map(|&i| particles[i].ptype).collect())
            .expect("groups are non-empty");
        let f = fitness(&group_ms, cfg.m_spatial);

        if R::from_f64_lossy(rng.next_f64()) < R::one() - f.value::<R>() {
            deaths += 1;
            for &i in &group {
                alive[i] = false;
                grid.remove(i, particles[i].x, particles[i].y);
            }
        } else {
            let load = R::one()
                - R::from_usize_lossy(n_count) / R::from_usize_lossy(cfg.d_max as usize);
            if R::from_f64_lossy(rng.next_f64()) < load {
                births += 1;
                sink.event(&ReplicationEvent {
                    run_id,
                    t,
                    multiset: group_ms,
                    fitness: f,
                })?;
                for &i in &group {
                    let (ptype, px, py) = {
                        let p = &particles[i];
                        (p.ptype, p.x, p.y)
                    };
                    let nx =
                        clamp_unit(px + cfg.move_sigma * R::from_f64_lossy(rng.next_gaussian()));
                    let ny =
                        clamp_unit(py + cfg.move_sigma * R::from_f64_lossy(rng.next_gaussian()));
                    let index = particles.len();
                    particles.push(Particle {
                        ptype,
                        x: nx,
                        y: ny,
                    });
                    alive.push(true);
                    grid.insert(index, nx, ny);
                }
            }
        }
    }

    // compact, preserving order
    let mut cursor = 0;
    particles.retain(|_| {
        let keep = alive[cursor];
        cursor += 1;
        keep
    });

    let mut mutated = 0usize;
    for p in particles.iter_mut() {
        if R::from_f64_lossy(rng.next_f64()) < cfg.point_mutation_prob {
            p.ptype = EntityType::from_raw(rng.next_entity_value(cfg.base.s_max));
            mutated += 1;
        }
    }

    rng.shuffle(particles);

    Ok(StepSummary {
        t,
        population_size: particles.len(),
        matches,
        births,
        deaths,
        mutated_multisets: mutated,
    })
}

/// A full spatial run. Initialization draws, per particle: type, x, y.
/// Extinction terminates the run early; the final summary then reports a
/// population of zero.
pub fn run_spatial<R: Real>(
    cfg: &SpatialConfig<R>,
    run_index: u64,
    sink: &mut dyn Sink,
) -> Result<Vec<StepSummary>> {
    cfg.validate()?;
    let mut rng = RngStream::new(cfg.base.seed, run_index);
    let mut particles: Vec<Particle<R>> = (0..cfg.base.init_count)
        .map(|_| {
            let ptype = EntityType::from_raw(rng.next_entity_value(cfg.base.s_max));
            let x = R::from_f64_lossy(rng.next_f64());
            let y = R::from_f64_lossy(rng.next_f64());
            Particle { ptype, x, y }
        })
        .collect();

    let mut summaries = Vec::new();
    for t in 1..=cfg.base.iterations {
        let summary = spatial_iteration(&mut particles, t, cfg, run_index, &mut rng, sink)?;
        sink.summary(&summary)?;
        summaries.push(summary);
        if particles.is_empty() {
            break;
        }
    }
    Ok(summaries)
}
