//! Sublinear estimators of the maximum matching size.
//!
//! Every estimator first builds the preprocessing matching `M` with
//! [`sparsify`](crate::sparsify::sparsify), then evaluates two lower bounds
//! on `mu(G)` and reports the larger:
//!
//! * `mu1 = |M| + (1 - 1/b) mu(M') + |B1| / (kb)`
//! * `mu2 = (1 - 1/b) |M| + |B2| / (kb)`
//!
//! with `b = 1 + sqrt 2` (see [`cases`] for `M'`, `B1`, `B2`). Each term is
//! estimated from `r` random vertex (or vertex copy) queries to lazy greedy
//! oracles, minus an additive offset. The general-graph variant replaces the
//! fractional terms by matching sizes of `M' + B1` and `M + B2`, estimated
//! with the local matching oracle of [`crate::lca`].
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::access::{ListAccess, MatrixOracle};
use crate::error::Error;
use crate::exact::{k_for_eps, kb_capacity, B};
use crate::lca::{ln_floor, LcaConfig};
use crate::matching::{BMatching, Matching};
use crate::matrix::MatrixToListView;
use crate::seed;
use crate::sparsify::{default_budget, sparsify, SparsifierConfig};
use crate::stats::StatsSnapshot;

pub mod cases;

use cases::{tag, Combine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Bipartite,
    General,
    Multiplicative,
    Matrix,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bipartite => "bipartite",
            Mode::General => "general",
            Mode::Multiplicative => "multiplicative",
            Mode::Matrix => "matrix",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "bipartite" => Mode::Bipartite,
            "general" => Mode::General,
            "multiplicative" => Mode::Multiplicative,
            "matrix" => Mode::Matrix,
            _ => return Err(Error::Config(format!("unknown mode {s:?}"))),
        })
    }
}

/// Default multiplicative-mode constant `a` in
/// `r = ceil(a (max degree / average degree) r_additive / eps^2)`.
pub const MULTIPLICATIVE_CONSTANT: f64 = 1.0 / 16.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimatorConfig {
    pub mode: Mode,
    pub eps: f64,
    /// Capacity of the matched side; the other side gets `ceil(k b)`.
    pub k: u32,
    /// Queries per estimated term; `None` means `ceil(6 ln^3 n)`.
    pub samples: Option<usize>,
    /// Sparsifier samples per vertex; `None` means `ceil(2 sqrt(n) ln n)`.
    pub sparsify_budget: Option<usize>,
    /// Compute `|M'|`, `|B1|`, `|B2|` (and the union matchings) exactly on
    /// the materialized graph instead of sampling.
    pub exact_reference: bool,
    pub lca: LcaConfig,
    pub multiplicative_constant: f64,
}

impl EstimatorConfig {
    /// Defaults for `eps`, with `k` the smallest integer above `1/(b eps^3)`.
    pub fn new(mode: Mode, eps: f64) -> Self {
        EstimatorConfig {
            mode,
            eps,
            k: if eps > 0.0 && eps < 1.0 { k_for_eps(eps) } else { 0 },
            samples: None,
            sparsify_budget: None,
            exact_reference: false,
            lca: LcaConfig::new(0.05),
            multiplicative_constant: MULTIPLICATIVE_CONSTANT,
        }
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn with_samples(mut self, r: usize) -> Self {
        self.samples = Some(r);
        self
    }

    pub fn with_exact_reference(mut self, on: bool) -> Self {
        self.exact_reference = on;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.samples == Some(0) {
            return bad("sample count must be positive".into());
        }
        if self.sparsify_budget == Some(0) {
            return bad("sparsifier budget must be positive".into());
        }
        if !(self.lca.eps > 0.0 && self.lca.eps < 1.0) || self.lca.ceiling == 0 {
            return bad("invalid local matching parameters".into());
        }
        if self.multiplicative_constant.is_nan() || self.multiplicative_constant <= 0.0 {
            return bad("multiplicative constant must be positive".into());
        }
        Ok(())
    }

    /// `k b` as a real, the divisor of the b-matching terms.
    pub fn kb(&self) -> f64 {
        self.k as f64 * B
    }

    /// `ceil(k b)`, the capacity of the free side.
    pub fn slots(&self) -> u32 {
        kb_capacity(self.k)
    }

    pub fn sample_count(&self, n: usize) -> usize {
        self.samples.unwrap_or_else(|| default_samples(n))
    }

    pub fn sparsifier(&self, n: usize) -> SparsifierConfig {
        SparsifierConfig {
            c: self.sparsify_budget.unwrap_or_else(|| default_budget(n)),
            order: None,
        }
    }
}

/// `ceil(6 ln^3 n)`.
pub fn default_samples(n: usize) -> usize {
    let l = ln_floor(n as f64);
    (libm::ceil(6.0 * l * l * l) as usize).max(1)
}

/// Sample count of the multiplicative estimator.
pub fn multiplicative_samples(base: usize, max_degree: usize, average_degree: f64, eps: f64, a: f64) -> usize {
    let ratio = max_degree as f64 / average_degree;
    (libm::ceil(a * ratio * base as f64 / (eps * eps)) as usize).max(1)
}

/// Query counts and scaled estimates of one run.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateSample {
    pub r: usize,
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub mu_m_prime: f64,
    pub mu_b1: f64,
    pub mu_b2: f64,
    pub m_prime_size: Option<usize>,
    pub b1_size: Option<u64>,
    pub b2_size: Option<u64>,
    pub mu_h1: Option<f64>,
    pub mu_h2: Option<f64>,
    pub mirror_escapes: Option<usize>,
}

/// The materialized matchings of an exact-reference run.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub m_prime: Matching,
    pub b1: BMatching,
    pub b2: BMatching,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EstimateReport {
    /// `max(mu1, mu2)` clamped to `[0, n/2]`.
    pub estimate: f64,
    pub mu1: f64,
    pub mu2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "M_size"))]
    pub m_size: usize,
    pub probes: StatsSnapshot,
    pub mode: Mode,
    pub seed: u64,
    pub config: EstimatorConfig,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub sample: EstimateSample,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub matching: Matching,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub witness: Option<Witness>,
}

fn clamp_estimate(x: f64, n: usize) -> f64 {
    x.max(0.0).min(n as f64 / 2.0)
}

struct Run<'a> {
    cfg: EstimatorConfig,
    seed: u64,
    domain: usize,
    m: &'a Matching,
    r: usize,
}

impl Run<'_> {
    fn finish<L: ListAccess>(self, list: &L, mode: Mode, combine: Combine, shift: f64) -> Result<EstimateReport, Error> {
        let out = cases::run(list, self.domain, self.m, &self.cfg, self.seed, self.r, combine)?;
        let (mu1, mu2) = (out.mu1 - shift, out.mu2 - shift);
        let mut config = self.cfg;
        config.mode = mode;
        config.samples = Some(self.r);
        Ok(EstimateReport {
            estimate: clamp_estimate(mu1.max(mu2), self.domain),
            mu1,
            mu2,
            m_size: self.m.len(),
            probes: list.stats().snapshot(),
            mode,
            seed: self.seed,
            config,
            sample: out.sample,
            matching: self.m.clone(),
            witness: out.witness,
        })
    }
}

fn preprocess<L: ListAccess>(list: &L, cfg: &EstimatorConfig, seed: u64) -> Result<Matching, Error> {
    cfg.validate()?;
    let n = list.vertex_count();
    sparsify(list, &cfg.sparsifier(n), seed::derive(seed, tag::SPARSIFY))
}

/// Bipartite estimator over the adjacency-list oracle.
pub fn estimate_bipartite<L: ListAccess>(list: &L, cfg: &EstimatorConfig, seed: u64) -> Result<EstimateReport, Error> {
    let m = preprocess(list, cfg, seed)?;
    estimate_with_matching(list, &m, cfg, seed, Mode::Bipartite)
}

/// General-graph estimator: matching sizes of the unions, estimated with the
/// local matching oracle.
pub fn estimate_general<L: ListAccess>(list: &L, cfg: &EstimatorConfig, seed: u64) -> Result<EstimateReport, Error> {
    let m = preprocess(list, cfg, seed)?;
    estimate_with_matching(list, &m, cfg, seed, Mode::General)
}

/// Runs the case estimators for a given preprocessing matching `m`.
/// `mode` picks how the cases combine; the matrix mode is not available here.
pub fn estimate_with_matching<L: ListAccess>(
    list: &L,
    m: &Matching,
    cfg: &EstimatorConfig,
    seed: u64,
    mode: Mode,
) -> Result<EstimateReport, Error> {
    cfg.validate()?;
    let n = list.vertex_count();
    let combine = match mode {
        Mode::Bipartite => Combine::Fractional,
        Mode::General => Combine::Union,
        Mode::Multiplicative => Combine::FractionalNoOffset,
        Mode::Matrix => return Err(Error::Config("the matrix mode needs a matrix oracle".into())),
    };
    let mut cfg = *cfg;
    cfg.mode = mode;
    let run = Run {
        cfg,
        seed,
        domain: n,
        m,
        r: cfg.sample_count(n),
    };
    run.finish(list, mode, combine, 0.0)
}

/// Multiplicative estimator: reads every degree, scales the sample count by
/// `max degree / average degree` and drops the additive offsets.
pub fn estimate_multiplicative<L: ListAccess>(list: &L, cfg: &EstimatorConfig, seed: u64) -> Result<EstimateReport, Error> {
    cfg.validate()?;
    let n = list.vertex_count();
    let degrees = (0..n).map(|v| list.degree(v)).collect::<Result<Vec<_>, _>>()?;
    let total: usize = degrees.iter().sum();
    let mut config = *cfg;
    config.mode = Mode::Multiplicative;
    if total == 0 {
        config.samples = Some(0);
        return Ok(EstimateReport {
            estimate: 0.0,
            mu1: 0.0,
            mu2: 0.0,
            m_size: 0,
            probes: list.stats().snapshot(),
            mode: Mode::Multiplicative,
            seed,
            config,
            sample: EstimateSample::default(),
            matching: Matching::new(),
            witness: None,
        });
    }
    let max = degrees.iter().copied().max().unwrap_or(0);
    let average = total as f64 / n as f64;
    let r = multiplicative_samples(cfg.sample_count(n), max, average, cfg.eps, cfg.multiplicative_constant);
    let m = sparsify(list, &cfg.sparsifier(n), seed::derive(seed, tag::SPARSIFY))?;
    Run {
        cfg: config,
        seed,
        domain: n,
        m: &m,
        r,
    }
    .finish(list, Mode::Multiplicative, Combine::FractionalNoOffset, 0.0)
}

/// Adjacency-matrix estimator through the reduction graph `H`: sparsify `H`
/// handling the mirror copies first, keep the part of `M` inside the primary
/// copy, estimate there, and subtract `n / ln n`.
pub fn estimate_matrix(oracle: MatrixOracle<'_>, cfg: &EstimatorConfig, seed: u64) -> Result<EstimateReport, Error> {
    cfg.validate()?;
    let h = MatrixToListView::new(oracle);
    let n = h.base_count();
    let sparsifier = SparsifierConfig {
        order: Some(h.mirror_first_order().collect()),
        ..cfg.sparsifier(n)
    };
    let m_h = sparsify(&h, &sparsifier, seed::derive(seed, tag::SPARSIFY))?;
    let m = m_h.retain(|u, v| u < n && v < n);
    let shift = n as f64 / ln_floor(n as f64);
    let mut report = Run {
        cfg: *cfg,
        seed,
        domain: n,
        m: &m,
        r: cfg.sample_count(n),
    }
    .finish(&h, Mode::Matrix, Combine::Fractional, shift)?;
    report.sample.mirror_escapes = Some(h.mirror_escapes(&m_h));
    Ok(report)
}

/// Dispatches on `cfg.mode`; the matrix mode builds its own matrix oracle
/// over the graph behind `list`.
pub fn estimate<L: ListAccess>(list: &L, cfg: &EstimatorConfig, seed: u64) -> Result<EstimateReport, Error> {
    match cfg.mode {
        Mode::Bipartite => estimate_bipartite(list, cfg, seed),
        Mode::General => estimate_general(list, cfg, seed),
        Mode::Multiplicative => estimate_multiplicative(list, cfg, seed),
        Mode::Matrix => Err(Error::Config("use estimate_matrix with a matrix oracle".into())),
    }
}
