//! A query-consistent local matching oracle over a graph `H` given as the
//! union of a few matched-edge oracles.
//!
//! A query explores the connected component of `v` in `H` breadth first. If
//! the component closes within the exploration cap, a maximum matching of the
//! component is computed on its canonically relabelled copy and cached for all
//! of its vertices, so every vertex of the component gets the same answer no
//! matter which one is asked first. Components larger than the cap are
//! answered by a seeded greedy maximal matching on `H` and counted as
//! truncations.
use alloc::vec::Vec;
use core::cell::RefCell;

use hashbrown::{HashMap, HashSet};
use rand::Rng;

use crate::error::Error;
use crate::exact::blossom_max_matching;
use crate::graph::{Graph, Vertex};
use crate::local::LocalGreedy;
use crate::matching::{BMatching, Matching};
use crate::rank::RankFunction;
use crate::seed;
use crate::stats::OracleStats;
use crate::view::CapView;

/// A source of matched edges: the partners of `v` in one layer of `H`.
pub trait EdgeLayer {
    fn partners(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error>;
}

impl EdgeLayer for Matching {
    fn partners(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        out.extend(self.partner(v));
        Ok(())
    }
}

impl EdgeLayer for BMatching {
    fn partners(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        if v < self.vertex_count() {
            out.extend(BMatching::partners(self, v));
        }
        Ok(())
    }
}

/// The edges a lazy greedy run puts into its (b-)matching.
pub struct GreedyLayer<'a, V> {
    engine: &'a RefCell<LocalGreedy<V>>,
}

impl<'a, V> GreedyLayer<'a, V> {
    pub fn new(engine: &'a RefCell<LocalGreedy<V>>) -> Self {
        GreedyLayer { engine }
    }
}

impl<V: CapView> EdgeLayer for GreedyLayer<'_, V> {
    fn partners(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        out.extend(self.engine.borrow_mut().partners(v)?);
        Ok(())
    }
}

/// `H` = union of the layers over the vertex ids `[0, universe)`, with
/// parallel edges collapsed.
pub struct UnionSubgraphOracle<'a> {
    layers: Vec<&'a dyn EdgeLayer>,
    universe: usize,
    degree_bound: usize,
    stats: OracleStats,
    log: RefCell<Option<Vec<Vertex>>>,
}

impl<'a> UnionSubgraphOracle<'a> {
    pub fn new(universe: usize, degree_bound: usize, layers: Vec<&'a dyn EdgeLayer>) -> Self {
        UnionSubgraphOracle {
            layers,
            universe,
            degree_bound: degree_bound.max(1),
            stats: OracleStats::new(0),
            log: RefCell::new(None),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Starts recording the vertices whose layers get queried.
    pub fn start_log(&self) {
        *self.log.borrow_mut() = Some(Vec::new());
    }

    pub fn take_log(&self) -> Vec<Vertex> {
        self.log.borrow_mut().take().unwrap_or_default()
    }

    /// Sorted, deduplicated neighbours of `v` in `H`.
    pub fn adjacent(&self, v: Vertex) -> Result<Vec<Vertex>, Error> {
        if let Some(log) = self.log.borrow_mut().as_mut() {
            log.push(v);
        }
        let mut out = Vec::new();
        for layer in &self.layers {
            layer.partners(v, &mut out)?;
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&w| w != v);
        Ok(out)
    }

    /// `H` as an explicit graph.
    pub fn materialize(&self) -> Result<Graph, Error> {
        let mut edges = Vec::new();
        for v in 0..self.universe {
            edges.extend(self.adjacent(v)?.into_iter().filter(|&w| v < w).map(|w| (v, w)));
        }
        Ok(Graph::from_edges(self.universe, &edges)?)
    }
}

impl CapView for UnionSubgraphOracle<'_> {
    fn universe(&self) -> usize {
        self.universe
    }

    fn capacity(&self, v: Vertex) -> Result<u32, Error> {
        Ok((v < self.universe) as u32)
    }

    fn neighbors(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        out.extend(self.adjacent(v)?);
        Ok(())
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LcaConfig {
    pub eps: f64,
    /// Hard ceiling on explored vertices, whatever `eps` asks for.
    pub ceiling: usize,
}

impl LcaConfig {
    pub fn new(eps: f64) -> Self {
        LcaConfig { eps, ceiling: 1 << 16 }
    }

    /// Exploration cap `min(degree_bound ^ ceil(1/eps^2), ceiling)`.
    pub fn radius(&self, degree_bound: usize) -> usize {
        let exp = libm::ceil(1.0 / (self.eps * self.eps)).min(64.0) as u32;
        let mut cap = 1usize;
        for _ in 0..exp {
            cap = cap.saturating_mul(degree_bound.max(2));
            if cap >= self.ceiling {
                break;
            }
        }
        cap.min(self.ceiling).max(1)
    }
}

/// One consistent run of the oracle over `h`.
pub struct LcaSession<'h, 'a> {
    h: &'h UnionSubgraphOracle<'a>,
    radius: usize,
    cache: HashMap<Vertex, Option<Vertex>>,
    fallback: LocalGreedy<&'h UnionSubgraphOracle<'a>>,
    truncations: u64,
}

impl<'h, 'a> LcaSession<'h, 'a> {
    pub fn new(h: &'h UnionSubgraphOracle<'a>, cfg: LcaConfig, seed: u64) -> Self {
        LcaSession {
            h,
            radius: cfg.radius(h.degree_bound()),
            cache: HashMap::new(),
            fallback: LocalGreedy::new(h, RankFunction::new(seed)),
            truncations: 0,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Queries that hit the exploration cap.
    pub fn truncations(&self) -> u64 {
        self.truncations
    }

    pub fn partner(&mut self, v: Vertex) -> Result<Option<Vertex>, Error> {
        if v >= self.h.universe() {
            return Err(Error::InvalidVertex {
                vertex: v,
                count: self.h.universe(),
            });
        }
        if let Some(&p) = self.cache.get(&v) {
            return Ok(p);
        }
        let mut seen = HashSet::new();
        seen.insert(v);
        let mut component = alloc::vec![v];
        let mut head = 0;
        let mut edges = Vec::new();
        while head < component.len() {
            let x = component[head];
            head += 1;
            for y in self.h.adjacent(x)? {
                if x < y {
                    edges.push((x, y));
                }
                if seen.insert(y) {
                    if component.len() == self.radius {
                        self.truncations += 1;
                        return Ok(self.fallback.vertex_matched(v)?.partner);
                    }
                    component.push(y);
                }
            }
        }
        component.sort_unstable();
        let index: HashMap<Vertex, usize> = component.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut local: Vec<_> = edges.iter().map(|&(x, y)| (index[&x], index[&y])).collect();
        local.sort_unstable();
        let m = blossom_max_matching(&Graph::from_edges(component.len(), &local)?);
        for (i, &x) in component.iter().enumerate() {
            self.cache.insert(x, m.partner(i).map(|j| component[j]));
        }
        Ok(self.cache[&v])
    }

    pub fn vertex_matched(&mut self, v: Vertex) -> Result<bool, Error> {
        Ok(self.partner(v)?.is_some())
    }
}

/// Convenience single query with a fresh session.
pub fn lca_vertex_matched(h: &UnionSubgraphOracle<'_>, cfg: LcaConfig, seed: u64, v: Vertex) -> Result<bool, Error> {
    LcaSession::new(h, cfg, seed).vertex_matched(v)
}

/// `(n'/2r) * #matched - n'/(2 ln n')` over `r` uniform vertices of `H`.
pub fn estimate_mu_union(h: &UnionSubgraphOracle<'_>, cfg: LcaConfig, seed: u64, samples: usize) -> Result<f64, Error> {
    let n = h.universe();
    if n == 0 || samples == 0 {
        return Ok(0.0);
    }
    let mut session = LcaSession::new(h, cfg, seed::derive(seed, 1));
    let mut rng = seed::rng(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        hits += session.vertex_matched(rng.gen_range(0..n))? as u64;
    }
    let n = n as f64;
    Ok(n * hits as f64 / (2.0 * samples as f64) - n / (2.0 * ln_floor(n)))
}

/// `ln x`, floored at `ln 2` so offsets stay finite on tiny inputs.
pub(crate) fn ln_floor(x: f64) -> f64 {
    libm::log(x.max(2.0))
}
