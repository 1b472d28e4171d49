use crate::error::Error;
use crate::exact::bounds::B;
use crate::graph::{Graph, Vertex};
use crate::matching::{BMatching, Matching};

/// Smallest integer strictly larger than `1 / (b * eps^3)`.
pub fn k_for_eps(eps: f64) -> u32 {
    let bound = 1.0 / (B * eps * eps * eps);
    libm::floor(bound) as u32 + 1
}

/// Capacity of the unmatched side, `ceil(k * b)`.
pub fn kb_capacity(k: u32) -> u32 {
    libm::ceil(k as f64 * B) as u32
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPassConfig {
    pub eps: f64,
    pub k: u32,
}

impl TwoPassConfig {
    pub fn from_eps(eps: f64) -> Self {
        TwoPassConfig { eps, k: k_for_eps(eps) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPassResult {
    pub value: f64,
    pub matching: Matching,
    pub b_size: u64,
}

/// Two passes over a bipartite edge stream: a greedy maximal matching `M`,
/// then a maximal b-matching between `V(M)` (capacity `k`) and the rest
/// (capacity `ceil(k b)`), returning `(1 - 1/b)|M| + |B| / (k b)`.
pub fn two_pass_streaming(n: usize, stream: &[(Vertex, Vertex)], cfg: TwoPassConfig) -> Result<TwoPassResult, Error> {
    if cfg.k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    let g = Graph::from_edges(n, stream)?;
    if let Err((u, v)) = g.two_coloring() {
        return Err(Error::NotBipartite(u, v));
    }

    let mut m = Matching::new();
    for &(u, v) in stream {
        if !m.is_matched(u) && !m.is_matched(v) {
            m.insert(u, v)?;
        }
    }

    let (cap_m, cap_free) = (cfg.k, kb_capacity(cfg.k));
    let capacity = (0..n)
        .map(|v| if m.is_matched(v) { cap_m } else { cap_free })
        .collect();
    let mut b = BMatching::new(capacity);
    for &(x, y) in stream {
        let (u, v) = match (m.is_matched(x), m.is_matched(y)) {
            (true, false) => (x, y),
            (false, true) => (y, x),
            _ => continue,
        };
        let mult = b.residual(u).min(b.residual(v));
        b.add(u, v, mult)?;
    }

    let kb = cfg.k as f64 * B;
    let value = (1.0 - 1.0 / B) * m.len() as f64 + b.size() as f64 / kb;
    Ok(TwoPassResult {
        value,
        matching: m,
        b_size: b.size(),
    })
}
