//! Seeded graph families.
use std::fmt;
use std::str::FromStr;

use mmest_core::seed::{self, Rng};
use mmest_core::{Graph, Vertex};
use rand::seq::SliceRandom;
use rand::Rng as _;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("cannot parse generator spec {0:?}")]
    Parse(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    RandomBipartite { n: usize, p: f64 },
    ErdosRenyi { n: usize, p: f64 },
    DRegular { n: usize, d: usize },
    DisjointMatching { n: usize },
    Star { n: usize },
    /// A complete graph on half the vertices plus a
    /// `ceil(eps n / 2)`-regular bipartite layer to the other half.
    HardDense { n: usize, eps: f64 },
    Path { n: usize },
    Cycle { n: usize },
}

impl GeneratorSpec {
    pub fn vertex_count(&self) -> usize {
        match *self {
            GeneratorSpec::RandomBipartite { n, .. }
            | GeneratorSpec::ErdosRenyi { n, .. }
            | GeneratorSpec::DRegular { n, .. }
            | GeneratorSpec::DisjointMatching { n }
            | GeneratorSpec::Star { n }
            | GeneratorSpec::HardDense { n, .. }
            | GeneratorSpec::Path { n }
            | GeneratorSpec::Cycle { n } => n,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::RandomBipartite { .. } => "random-bipartite",
            GeneratorSpec::ErdosRenyi { .. } => "erdos-renyi",
            GeneratorSpec::DRegular { .. } => "d-regular",
            GeneratorSpec::DisjointMatching { .. } => "disjoint-matching",
            GeneratorSpec::Star { .. } => "star",
            GeneratorSpec::HardDense { .. } => "hard-dense",
            GeneratorSpec::Path { .. } => "path",
            GeneratorSpec::Cycle { .. } => "cycle",
        }
    }

    /// Whether every graph of the family is bipartite.
    pub fn is_bipartite_family(&self) -> bool {
        match *self {
            GeneratorSpec::RandomBipartite { .. }
            | GeneratorSpec::DisjointMatching { .. }
            | GeneratorSpec::Star { .. }
            | GeneratorSpec::Path { .. } => true,
            GeneratorSpec::Cycle { n } => n % 2 == 0,
            _ => false,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.family();
        match *self {
            GeneratorSpec::RandomBipartite { n, p } | GeneratorSpec::ErdosRenyi { n, p } => write!(f, "{name}:{n}:{p}"),
            GeneratorSpec::DRegular { n, d } => write!(f, "{name}:{n}:{d}"),
            GeneratorSpec::HardDense { n, eps } => write!(f, "{name}:{n}:{eps}"),
            GeneratorSpec::DisjointMatching { n } | GeneratorSpec::Star { n } | GeneratorSpec::Path { n } | GeneratorSpec::Cycle { n } => {
                write!(f, "{name}:{n}")
            }
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GenError;

    /// `family:n[:param]`, e.g. `erdos-renyi:1000:0.008` or `star:50`.
    fn from_str(s: &str) -> Result<Self, GenError> {
        let bad = || GenError::Parse(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let n: usize = parts.get(1).and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let real = || -> Result<f64, GenError> { parts.get(2).and_then(|x| x.parse().ok()).ok_or_else(bad) };
        let arity = |k: usize| if parts.len() == k { Ok(()) } else { Err(bad()) };
        let spec = match parts[0] {
            "random-bipartite" => GeneratorSpec::RandomBipartite { n, p: real()? },
            "erdos-renyi" => GeneratorSpec::ErdosRenyi { n, p: real()? },
            "d-regular" => GeneratorSpec::DRegular {
                n,
                d: parts.get(2).and_then(|x| x.parse().ok()).ok_or_else(bad)?,
            },
            "hard-dense" => GeneratorSpec::HardDense { n, eps: real()? },
            "disjoint-matching" => GeneratorSpec::DisjointMatching { n },
            "star" => GeneratorSpec::Star { n },
            "path" => GeneratorSpec::Path { n },
            "cycle" => GeneratorSpec::Cycle { n },
            _ => return Err(bad()),
        };
        match spec {
            GeneratorSpec::RandomBipartite { .. }
            | GeneratorSpec::ErdosRenyi { .. }
            | GeneratorSpec::DRegular { .. }
            | GeneratorSpec::HardDense { .. } => arity(3)?,
            _ => arity(2)?,
        }
        Ok(spec)
    }
}

fn check_probability(p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::Infeasible(format!("edge probability {p} outside [0, 1]")))
    }
}

/// Indices `0..total` kept independently with probability `p`, by geometric
/// skipping.
fn bernoulli_indices(total: u64, p: f64, rng: &mut Rng, mut keep: impl FnMut(u64)) {
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(keep);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut i: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (total - i) as f64 {
            return;
        }
        i += skip as u64;
        keep(i);
        i += 1;
        if i >= total {
            return;
        }
    }
}

fn erdos_renyi(n: usize, p: f64, rng: &mut Rng) -> Vec<(Vertex, Vertex)> {
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut edges = Vec::new();
    // pair index t enumerates (u, v), v < u, row by row
    let (mut row, mut row_start) = (1u64, 0u64);
    bernoulli_indices(total, p, rng, |t| {
        while t >= row_start + row {
            row_start += row;
            row += 1;
        }
        edges.push(((t - row_start) as usize, row as usize));
    });
    edges
}

fn random_bipartite(n: usize, p: f64, rng: &mut Rng) -> Vec<(Vertex, Vertex)> {
    let (left, right) = (n / 2, n - n / 2);
    let mut edges = Vec::new();
    bernoulli_indices(left as u64 * right as u64, p, rng, |t| {
        edges.push(((t / right as u64) as usize, left + (t % right as u64) as usize));
    });
    edges
}

/// Random `d`-regular graph: repeatedly pair two random free points when
/// they form a new simple edge, restarting when no such pair is left.
fn d_regular(n: usize, d: usize, rng: &mut Rng) -> Result<Vec<(Vertex, Vertex)>, GenError> {
    if (d > 0 && d >= n) || (n * d) % 2 == 1 {
        return Err(GenError::Infeasible(format!("no {d}-regular graph on {n} vertices")));
    }
    'restart: for _ in 0..1000 {
        let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut adjacent = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let mut paired = false;
            for _ in 0..64 {
                let i = rng.gen_range(0..points.len());
                let j = rng.gen_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if i != j && u != v && !adjacent.contains(&(u.min(v), u.max(v))) {
                    adjacent.insert((u.min(v), u.max(v)));
                    edges.push((u, v));
                    let (hi, lo) = (i.max(j), i.min(j));
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    paired = true;
                    break;
                }
            }
            if !paired {
                let stuck = points.iter().enumerate().all(|(i, &u)| {
                    points[i + 1..].iter().all(|&v| u == v || adjacent.contains(&(u.min(v), u.max(v))))
                });
                if stuck {
                    continue 'restart;
                }
            }
        }
        return Ok(edges);
    }
    Err(GenError::Infeasible(format!("pairing failed for d-regular({n}, {d})")))
}

fn hard_dense(n: usize, eps: f64, rng: &mut Rng) -> Result<Vec<(Vertex, Vertex)>, GenError> {
    if n % 2 == 1 || !(eps > 0.0 && eps <= 1.0) {
        return Err(GenError::Infeasible(format!("hard-dense needs even n and eps in (0, 1], got {n}, {eps}")));
    }
    let half = n / 2;
    let d = (eps * half as f64).ceil() as usize;
    if d > half {
        return Err(GenError::Infeasible(format!("layer degree {d} exceeds {half}")));
    }
    let mut edges: Vec<_> = (0..half).flat_map(|a| (a + 1..half).map(move |b| (a, b))).collect();
    let mut shifts: Vec<usize> = (0..half).collect();
    shifts.shuffle(rng);
    let mut perm: Vec<usize> = (half..n).collect();
    perm.shuffle(rng);
    for &s in &shifts[..d] {
        for a in 0..half {
            edges.push((a, perm[(a + s) % half]));
        }
    }
    Ok(edges)
}

/// The graph of `spec` for `seed`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Graph, GenError> {
    let mut rng = seed::rng(seed);
    let n = spec.vertex_count();
    let edges = match *spec {
        GeneratorSpec::RandomBipartite { n, p } => {
            check_probability(p)?;
            random_bipartite(n, p, &mut rng)
        }
        GeneratorSpec::ErdosRenyi { n, p } => {
            check_probability(p)?;
            erdos_renyi(n, p, &mut rng)
        }
        GeneratorSpec::DRegular { n, d } => d_regular(n, d, &mut rng)?,
        GeneratorSpec::DisjointMatching { n } => {
            if n % 2 == 1 {
                return Err(GenError::Infeasible(format!("a perfect matching needs even n, got {n}")));
            }
            (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect()
        }
        GeneratorSpec::Star { n } => (1..n).map(|v| (0, v)).collect(),
        GeneratorSpec::HardDense { n, eps } => hard_dense(n, eps, &mut rng)?,
        GeneratorSpec::Path { n } => (1..n).map(|v| (v - 1, v)).collect(),
        GeneratorSpec::Cycle { n } => {
            if n < 3 {
                return Err(GenError::Infeasible(format!("a cycle needs at least 3 vertices, got {n}")));
            }
            (0..n).map(|v| (v, (v + 1) % n)).collect()
        }
    };
    Graph::from_edges(n, &edges).map_err(|e| GenError::Infeasible(e.to_string()))
}
