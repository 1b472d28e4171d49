//! Independent estimator instances raced on separate threads.
use std::sync::mpsc;
use std::sync::Arc;

use mmest_core::access::{ListOracle, MatrixOracle};
use mmest_core::estimator::{estimate, estimate_matrix, EstimateReport, EstimatorConfig, Mode};
use mmest_core::{seed, Error, Graph, OracleStats};

#[derive(Debug, thiserror::Error)]
pub enum ParallelError {
    #[error("instance count must be at least 1")]
    NoInstances,
    #[error("all {} instances failed: {}", .0.len(), .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    AllFailed(Vec<Error>),
}

/// Seed of instance `index`.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    seed::derive(seed, index as u64)
}

/// One complete estimator run with its own counters.
pub fn run_instance(g: &Graph, cfg: &EstimatorConfig, seed: u64) -> Result<EstimateReport, Error> {
    let stats = OracleStats::new(g.vertex_count());
    match cfg.mode {
        Mode::Matrix => estimate_matrix(MatrixOracle::new(g, &stats), cfg, seed),
        _ => estimate(&ListOracle::new(g, &stats), cfg, seed),
    }
}

/// Starts `count` instances with seeds `instance_seed(seed, i)` and returns
/// the first successful report. Losing instances run to completion in the
/// background; their results are dropped.
pub fn run_parallel_instances(g: Arc<Graph>, cfg: &EstimatorConfig, seed: u64, count: usize) -> Result<EstimateReport, ParallelError> {
    if count == 0 {
        return Err(ParallelError::NoInstances);
    }
    let (sender, receiver) = mpsc::channel();
    for index in 0..count {
        let (g, cfg, sender) = (Arc::clone(&g), *cfg, sender.clone());
        std::thread::spawn(move || {
            let _ = sender.send(run_instance(&g, &cfg, instance_seed(seed, index)));
        });
    }
    drop(sender);
    let mut failures = Vec::new();
    for result in receiver {
        match result {
            Ok(report) => return Ok(report),
            Err(e) => failures.push(e),
        }
    }
    Err(ParallelError::AllFailed(failures))
}
