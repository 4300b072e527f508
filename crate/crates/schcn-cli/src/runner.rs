//! Parallel simulation driver. Chunks are computed on a worker pool but
//! always merged in chunk-index order, so the estimate is byte-identical
//! for any worker count.

use crate::errors::AppError;
use rayon::prelude::*;
use schcn_core::sim::{chunk_count, simulate_chunk, ChunkAccum, Scenario, SimConfig, SimEstimate};

/// Simulate one SNR point, splitting chunks across `workers` threads
/// (0 = rayon's default).
pub fn run_sim_point(
    scenario: &Scenario,
    cfg: &SimConfig,
    gamma_t1: f64,
    workers: usize,
) -> Result<SimEstimate, AppError> {
    scenario.validate()?;
    if cfg.trials == 0 {
        return Err(AppError::Invalid("trials must be positive".into()));
    }
    let chunks = chunk_count(cfg.trials);
    let compute = || -> Vec<ChunkAccum> {
        (0..chunks)
            .into_par_iter()
            .map(|i| simulate_chunk(scenario, cfg, gamma_t1, i))
            .collect()
    };
    let accs = if workers == 0 {
        compute()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| AppError::Invalid(format!("worker pool: {e}")))?;
        pool.install(compute)
    };
    let mut total = ChunkAccum::default();
    for acc in &accs {
        total.merge(acc);
    }
    Ok(total.estimate(cfg.seed, cfg.mode))
}
