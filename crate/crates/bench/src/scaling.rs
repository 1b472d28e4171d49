//! Probe-count scaling: median probes per size, then a least-squares fit of
//! `ln(probes)` against `ln(n)`.
use std::fmt;
use std::str::FromStr;

use mmest_core::access::{ListOracle, MatrixOracle};
use mmest_core::estimator::{estimate, estimate_matrix, EstimatorConfig, Mode};
use mmest_core::sparsify::{sparsify, SparsifierConfig};
use mmest_core::{seed, Error, OracleStats};
use serde::Serialize;

use crate::generators::{generate, GenError, GeneratorSpec};

#[derive(Debug, thiserror::Error)]
pub enum ScalingError {
    #[error("a scaling study needs at least 4 strictly increasing sizes, got {0:?}")]
    InsufficientPoints(Vec<usize>),
    #[error(transparent)]
    Generator(#[from] GenError),
    #[error(transparent)]
    Estimator(#[from] Error),
    #[error("cannot parse family {0:?}")]
    Family(String),
}

/// A generator family with its parameters expressed relative to `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingFamily {
    /// `p = average_degree / n`.
    ErdosRenyi { average_degree: f64 },
    /// `p = 2 average_degree / n`, so sides of `n/2` see the given average.
    RandomBipartite { average_degree: f64 },
    DRegular { d: usize },
    HardDense { eps: f64 },
    DisjointMatching,
    Star,
    Path,
    Cycle,
}

impl ScalingFamily {
    pub fn spec(&self, n: usize) -> GeneratorSpec {
        let nf = n.max(1) as f64;
        match *self {
            ScalingFamily::ErdosRenyi { average_degree } => GeneratorSpec::ErdosRenyi {
                n,
                p: (average_degree / nf).min(1.0),
            },
            ScalingFamily::RandomBipartite { average_degree } => GeneratorSpec::RandomBipartite {
                n,
                p: (2.0 * average_degree / nf).min(1.0),
            },
            ScalingFamily::DRegular { d } => GeneratorSpec::DRegular { n, d },
            ScalingFamily::HardDense { eps } => GeneratorSpec::HardDense { n, eps },
            ScalingFamily::DisjointMatching => GeneratorSpec::DisjointMatching { n },
            ScalingFamily::Star => GeneratorSpec::Star { n },
            ScalingFamily::Path => GeneratorSpec::Path { n },
            ScalingFamily::Cycle => GeneratorSpec::Cycle { n },
        }
    }
}

impl fmt::Display for ScalingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingFamily::ErdosRenyi { average_degree } => write!(f, "erdos-renyi:{average_degree}"),
            ScalingFamily::RandomBipartite { average_degree } => write!(f, "random-bipartite:{average_degree}"),
            ScalingFamily::DRegular { d } => write!(f, "d-regular:{d}"),
            ScalingFamily::HardDense { eps } => write!(f, "hard-dense:{eps}"),
            ScalingFamily::DisjointMatching => f.write_str("disjoint-matching"),
            ScalingFamily::Star => f.write_str("star"),
            ScalingFamily::Path => f.write_str("path"),
            ScalingFamily::Cycle => f.write_str("cycle"),
        }
    }
}

impl FromStr for ScalingFamily {
    type Err = ScalingError;

    /// `erdos-renyi[:avg]` (default 8), `random-bipartite[:avg]` (default 8),
    /// `d-regular:d`, `hard-dense:eps`, or a parameterless family name.
    fn from_str(s: &str) -> Result<Self, ScalingError> {
        let bad = || ScalingError::Family(s.to_string());
        let (name, param) = match s.split_once(':') {
            Some((name, param)) => (name, Some(param)),
            None => (s, None),
        };
        let real = |default: Option<f64>| -> Result<f64, ScalingError> {
            match param {
                Some(p) => p.parse().map_err(|_| bad()),
                None => default.ok_or_else(bad),
            }
        };
        let none = |family: ScalingFamily| if param.is_none() { Ok(family) } else { Err(bad()) };
        match name {
            "erdos-renyi" => Ok(ScalingFamily::ErdosRenyi {
                average_degree: real(Some(8.0))?,
            }),
            "random-bipartite" => Ok(ScalingFamily::RandomBipartite {
                average_degree: real(Some(8.0))?,
            }),
            "d-regular" => Ok(ScalingFamily::DRegular {
                d: param.and_then(|p| p.parse().ok()).ok_or_else(bad)?,
            }),
            "hard-dense" => Ok(ScalingFamily::HardDense { eps: real(None)? }),
            "disjoint-matching" => none(ScalingFamily::DisjointMatching),
            "star" => none(ScalingFamily::Star),
            "path" => none(ScalingFamily::Path),
            "cycle" => none(ScalingFamily::Cycle),
            _ => Err(bad()),
        }
    }
}

/// The procedure whose probes are counted.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingTarget {
    Estimator(EstimatorConfig),
    /// The preprocessing matching alone, with the default budget.
    Sparsify,
    /// Calibration control: reports a fixed probe count.
    ConstantProbes(u64),
}

impl fmt::Display for ScalingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingTarget::Estimator(cfg) => cfg.mode.fmt(f),
            ScalingTarget::Sparsify => f.write_str("sparsify"),
            ScalingTarget::ConstantProbes(c) => write!(f, "constant:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    /// List plus matrix probes, one entry per trial.
    pub probes: Vec<u64>,
    pub median: f64,
    /// Observed minus fitted `ln(median)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub family: String,
    pub target: String,
    pub slope: f64,
    pub intercept: f64,
    pub points: Vec<ScalingPoint>,
}

/// Least-squares line through `(xs, ys)`: `(slope, intercept, residuals)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, Vec<f64>) {
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residuals = xs.iter().zip(ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    (slope, intercept, residuals)
}

fn median(values: &mut [u64]) -> f64 {
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] as f64 + values[mid] as f64) / 2.0
    }
}

/// Total probes of one run of `target` on `spec` with `seed`.
pub fn probe_count(spec: &GeneratorSpec, target: &ScalingTarget, seed: u64) -> Result<u64, ScalingError> {
    if let ScalingTarget::ConstantProbes(c) = target {
        return Ok(*c);
    }
    let g = generate(spec, seed)?;
    let stats = OracleStats::new(g.vertex_count());
    match target {
        ScalingTarget::Estimator(cfg) if cfg.mode == Mode::Matrix => {
            estimate_matrix(MatrixOracle::new(&g, &stats), cfg, seed)?;
        }
        ScalingTarget::Estimator(cfg) => {
            estimate(&ListOracle::new(&g, &stats), cfg, seed)?;
        }
        ScalingTarget::Sparsify => {
            let list = ListOracle::new(&g, &stats);
            sparsify(&list, &SparsifierConfig::for_vertex_count(g.vertex_count()), seed)?;
        }
        ScalingTarget::ConstantProbes(_) => unreachable!(),
    }
    Ok(stats.list_probes() + stats.matrix_probes())
}

/// Runs `trials` seeds per size and fits the log-log slope of the medians.
pub fn scaling_study(
    family: &ScalingFamily,
    sizes: &[usize],
    trials: usize,
    target: &ScalingTarget,
    base_seed: u64,
) -> Result<ScalingReport, ScalingError> {
    if sizes.len() < 4 || sizes.windows(2).any(|w| w[0] >= w[1]) || trials == 0 {
        return Err(ScalingError::InsufficientPoints(sizes.to_vec()));
    }
    let jobs: Vec<(usize, usize)> = sizes.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let counts: Vec<Result<u64, ScalingError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(n, t)| {
                scope.spawn(move || probe_count(&family.spec(n), target, seed::derive(seed::derive(base_seed, n as u64), t as u64)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scaling worker panicked")).collect()
    });
    let mut counts = counts.into_iter();
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let probes = counts.by_ref().take(trials).collect::<Result<Vec<_>, _>>()?;
        let med = median(&mut probes.clone());
        points.push(ScalingPoint {
            n,
            probes,
            median: med,
            residual: 0.0,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.median.max(1.0).ln()).collect();
    let (slope, intercept, residuals) = fit_line(&xs, &ys);
    for (p, r) in points.iter_mut().zip(residuals) {
        p.residual = r;
    }
    Ok(ScalingReport {
        family: family.to_string(),
        target: target.to_string(),
        slope,
        intercept,
        points,
    })
}

/// `n,trial,probes,median,residual,slope` rows.
pub fn write_scaling_csv(report: &ScalingReport, out: impl std::io::Write) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["family", "target", "n", "trial", "probes", "median", "residual", "slope"])?;
    for p in &report.points {
        for (trial, probes) in p.probes.iter().enumerate() {
            writer.write_record([
                report.family.clone(),
                report.target.clone(),
                p.n.to_string(),
                trial.to_string(),
                probes.to_string(),
                p.median.to_string(),
                p.residual.to_string(),
                report.slope.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 * x - 2.0).collect();
        let (slope, intercept, residuals) = fit_line(&xs, &ys);
        assert!((slope - 1.5).abs() < 1e-12 && (intercept + 2.0).abs() < 1e-12);
        assert!(residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("erdos-renyi".parse::<ScalingFamily>().unwrap(), ScalingFamily::ErdosRenyi { average_degree: 8.0 });
        assert_eq!("d-regular:3".parse::<ScalingFamily>().unwrap(), ScalingFamily::DRegular { d: 3 });
        assert!("d-regular".parse::<ScalingFamily>().is_err());
        assert!("star:3".parse::<ScalingFamily>().is_err());
    }
}
