//! Parallel batch driver.
//!
//! Chunks are filled on a rayon pool in waves of [`WAVE`] chunks; each wave
//! is collected in chunk order and fed to an [`OrderedMerger`]. The merge
//! tree depends only on the chunk count, so the result is the same for any
//! worker count and equal to [`TrajectorySampler::run`].

use pumprecoil_core::trajectory::{OrderedMerger, SampleSink};
use pumprecoil_core::{SamplerPlan, TrajectorySampler};
use rayon::prelude::*;

use crate::error::AppError;

/// Chunks in flight at once.
pub const WAVE: usize = 64;

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn run<S, F>(sampler: &TrajectorySampler, plan: SamplerPlan, make: F) -> Result<S, AppError>
where
    S: SampleSink + Send,
    F: Fn() -> S + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.n_workers.max(1))
        .build()
        .map_err(|e| AppError::Runtime(format!("worker pool: {e}")))?;
    let ranges: Vec<_> = plan.chunks().collect();
    let mut merger = OrderedMerger::new();
    for wave in ranges.chunks(WAVE) {
        let parts: Vec<Result<S, _>> = pool.install(|| {
            wave.par_iter()
                .map(|r| {
                    let mut sink = make();
                    sampler.fill(plan.seed, r.clone(), &mut sink).map(|_| sink)
                })
                .collect()
        });
        // first failure in index order, whoever hit it first
        for p in parts {
            merger.push(p?);
        }
    }
    Ok(merger.finish().unwrap_or_else(make))
}
