//! Single runs and the CSV experiment runner.
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use mmest_core::access::{ListOracle, MatrixOracle};
use mmest_core::estimator::{estimate, estimate_matrix, EstimateReport, EstimatorConfig, Mode};
use mmest_core::exact::{exact_max_matching, k_for_eps, two_pass_streaming, TwoPassConfig};
use mmest_core::{seed, Error, Graph, OracleStats, StatsSnapshot};
use serde::Serialize;

use crate::generators::{generate, GeneratorSpec};

/// Estimator modes plus the two reference computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Estimator(Mode),
    TwoPass,
    Exact,
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunMode::Estimator(mode) => mode.fmt(f),
            RunMode::TwoPass => f.write_str("twopass"),
            RunMode::Exact => f.write_str("exact"),
        }
    }
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "twopass" => Ok(RunMode::TwoPass),
            "exact" => Ok(RunMode::Exact),
            _ => s.parse().map(RunMode::Estimator),
        }
    }
}

/// Knobs shared by every run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub eps: f64,
    /// `None` picks the smallest valid `k` for `eps`.
    pub k: Option<u32>,
    pub samples: Option<usize>,
    pub exact_reference: bool,
}

impl RunParams {
    pub fn new(eps: f64) -> Self {
        RunParams {
            eps,
            k: None,
            samples: None,
            exact_reference: false,
        }
    }

    pub fn k(&self) -> u32 {
        self.k.unwrap_or_else(|| if self.eps > 0.0 && self.eps < 1.0 { k_for_eps(self.eps) } else { 0 })
    }

    pub fn estimator_config(&self, mode: Mode) -> EstimatorConfig {
        let mut cfg = EstimatorConfig::new(mode, self.eps).with_k(self.k()).with_exact_reference(self.exact_reference);
        cfg.samples = self.samples;
        cfg
    }
}

/// What one run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub estimate: f64,
    pub matching_size: usize,
    pub probes: StatsSnapshot,
    /// Present for estimator modes.
    pub report: Option<EstimateReport>,
    /// Size of the second-pass b-matching, for the two-pass mode.
    pub b_size: Option<u64>,
}

pub fn run_once(g: &Graph, mode: RunMode, params: &RunParams, seed: u64) -> Result<RunOutcome, Error> {
    let stats = OracleStats::new(g.vertex_count());
    match mode {
        RunMode::Estimator(mode) => {
            let cfg = params.estimator_config(mode);
            let report = match mode {
                Mode::Matrix => estimate_matrix(MatrixOracle::new(g, &stats), &cfg, seed)?,
                _ => estimate(&ListOracle::new(g, &stats), &cfg, seed)?,
            };
            Ok(RunOutcome {
                estimate: report.estimate,
                matching_size: report.m_size,
                probes: report.probes.clone(),
                report: Some(report),
                b_size: None,
            })
        }
        RunMode::TwoPass => {
            let stream: Vec<_> = g.edges().collect();
            let cfg = TwoPassConfig {
                eps: params.eps,
                k: params.k(),
            };
            let result = two_pass_streaming(g.vertex_count(), &stream, cfg)?;
            Ok(RunOutcome {
                estimate: result.value,
                matching_size: result.matching.len(),
                probes: stats.snapshot(),
                report: None,
                b_size: Some(result.b_size),
            })
        }
        RunMode::Exact => {
            let m = exact_max_matching(g);
            Ok(RunOutcome {
                estimate: m.len() as f64,
                matching_size: m.len(),
                probes: stats.snapshot(),
                report: None,
                b_size: None,
            })
        }
    }
}

/// JSON form of a two-pass or exact run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceReport {
    pub estimate: f64,
    #[serde(rename = "M_size")]
    pub m_size: usize,
    pub b_size: Option<u64>,
    pub probes: StatsSnapshot,
    pub mode: String,
    pub seed: u64,
    pub eps: f64,
    pub k: u32,
}

impl RunOutcome {
    /// The estimator report, or a [`ReferenceReport`] for the reference modes.
    pub fn to_json(&self, mode: RunMode, seed: u64, params: &RunParams) -> serde_json::Value {
        match &self.report {
            Some(report) => serde_json::to_value(report),
            None => serde_json::to_value(ReferenceReport {
                estimate: self.estimate,
                m_size: self.matching_size,
                b_size: self.b_size,
                probes: self.probes.clone(),
                mode: mode.to_string(),
                seed,
                eps: params.eps,
                k: params.k(),
            }),
        }
        .expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub generator: String,
    pub n: usize,
    pub seed: u64,
    pub mode: String,
    pub estimate: Option<f64>,
    pub exact_mu: Option<usize>,
    pub ratio: Option<f64>,
    pub list_probes: Option<u64>,
    pub matrix_probes: Option<u64>,
    pub wall_time_ms: Option<f64>,
    pub error: Option<String>,
}

pub const CSV_HEADER: &str = "generator,n,seed,mode,estimate,exact_mu,ratio,list_probes,matrix_probes,wall_time_ms,error";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: RunParams,
    pub base_seed: u64,
    /// Largest `n` for which `exact_mu` is computed on bipartite inputs.
    pub exact_cap_bipartite: usize,
    /// Same, for non-bipartite inputs.
    pub exact_cap_general: usize,
    /// Off makes the CSV byte-identical across reruns.
    pub record_wall_time: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(params: RunParams, base_seed: u64) -> Self {
        ExperimentConfig {
            params,
            base_seed,
            exact_cap_bipartite: 5000,
            exact_cap_general: 2000,
            record_wall_time: true,
            threads: None,
        }
    }
}

/// Seed of trial `trial`; every mode of a trial sees the same graph.
pub fn trial_seed(base_seed: u64, trial: usize) -> u64 {
    seed::derive(base_seed, trial as u64)
}

/// `mu(g)` when `g` is within the exact cap for its kind.
pub fn exact_mu(g: &Graph, cfg: &ExperimentConfig) -> Option<usize> {
    let bipartite = g.is_bipartite();
    let cap = if bipartite { cfg.exact_cap_bipartite } else { cfg.exact_cap_general };
    (g.vertex_count() <= cap).then(|| exact_max_matching(g).len())
}

/// Runs `mode` on `g` and fills a row labelled `generator`.
pub fn measure(
    generator: &str,
    g: &Graph,
    mode: RunMode,
    seed: u64,
    cfg: &ExperimentConfig,
) -> (ExperimentRow, Result<RunOutcome, Error>) {
    let mut row = blank_row(generator, g.vertex_count(), seed, mode);
    let start = Instant::now();
    let outcome = run_once(g, mode, &cfg.params, seed);
    let elapsed = start.elapsed();
    match &outcome {
        Ok(out) => {
            row.estimate = Some(out.estimate);
            row.list_probes = Some(out.probes.list_probes);
            row.matrix_probes = Some(out.probes.matrix_probes);
            if cfg.record_wall_time {
                row.wall_time_ms = Some(elapsed.as_secs_f64() * 1e3);
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.exact_mu = exact_mu(g, cfg);
    if let (Some(estimate), Some(mu)) = (row.estimate, row.exact_mu) {
        if mu > 0 {
            row.ratio = Some(estimate / mu as f64);
        }
    }
    (row, outcome)
}

/// A row with only the identifying columns filled in.
pub fn blank_row(generator: &str, n: usize, seed: u64, mode: RunMode) -> ExperimentRow {
    ExperimentRow {
        generator: generator.to_string(),
        n,
        seed,
        mode: mode.to_string(),
        estimate: None,
        exact_mu: None,
        ratio: None,
        list_probes: None,
        matrix_probes: None,
        wall_time_ms: None,
        error: None,
    }
}

fn run_row(spec: &GeneratorSpec, mode: RunMode, trial: usize, cfg: &ExperimentConfig) -> ExperimentRow {
    let seed = trial_seed(cfg.base_seed, trial);
    match generate(spec, seed) {
        Ok(g) => measure(&spec.to_string(), &g, mode, seed, cfg).0,
        Err(e) => {
            let mut row = blank_row(&spec.to_string(), spec.vertex_count(), seed, mode);
            row.error = Some(e.to_string());
            row
        }
    }
}

/// One row per (spec, mode, trial), in that order. Failed runs keep their
/// row with the error message filled in.
pub fn collect_rows(specs: &[GeneratorSpec], modes: &[RunMode], trials: usize, cfg: &ExperimentConfig) -> Vec<ExperimentRow> {
    let jobs: Vec<_> = specs
        .iter()
        .flat_map(|spec| modes.iter().flat_map(move |&mode| (0..trials).map(move |t| (spec, mode, t))))
        .collect();
    let slots: Vec<Mutex<Option<ExperimentRow>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = cfg
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
        .clamp(1, jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(spec, mode, trial)) = jobs.get(i) else { break };
                *slots[i].lock().unwrap() = Some(run_row(spec, mode, trial, cfg));
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("every job ran")).collect()
}

/// Runs the grid and writes the CSV.
pub fn run_experiment(
    specs: &[GeneratorSpec],
    modes: &[RunMode],
    trials: usize,
    cfg: &ExperimentConfig,
    out: impl Write,
) -> Result<Vec<ExperimentRow>, csv::Error> {
    let rows = collect_rows(specs, modes, trials, cfg);
    write_rows(&rows, out)?;
    Ok(rows)
}

pub fn write_rows(rows: &[ExperimentRow], out: impl Write) -> Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
