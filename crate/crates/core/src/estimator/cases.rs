//! The two estimation cases over a fixed preprocessing matching `M`.
//!
//! Case 1 works inside `G[V \ V(M)]`: a greedy matching `M'` of it, then the
//! b-matching `B1` between `V(M')` (capacity `k`) and the other free vertices
//! (capacity `ceil(kb)`). Case 2 is the b-matching `B2` between `V(M)` and the
//! free vertices. Only vertices below `domain` take part.
use alloc::vec::Vec;
use core::cell::RefCell;

use rand::Rng;

use crate::access::ListAccess;
use crate::bipartite::{BipartiteView, InnerGreedySides, MatchedSides};
use crate::error::Error;
use crate::exact::{gmm, max_matching_size, maximal_bmatching_cross, Side, B};
use crate::graph::{Graph, Vertex};
use crate::lca::{estimate_mu_union, ln_floor, EdgeLayer, GreedyLayer, UnionSubgraphOracle};
use crate::local::LocalGreedy;
use crate::matching::{BMatching, Matching};
use crate::rank::RankFunction;
use crate::seed;
use crate::view::{InducedView, Unmatched};

use super::{EstimateSample, EstimatorConfig, Witness};

/// Stream tags for the independent randomness of one run.
pub(crate) mod tag {
    pub const SPARSIFY: u64 = 10;
    pub const INNER_RANKS: u64 = 11;
    pub const OUTER_RANKS: u64 = 12;
    pub const CASE2_RANKS: u64 = 13;
    pub const SAMPLE_X: u64 = 20;
    pub const SAMPLE_Y: u64 = 21;
    pub const SAMPLE_Z: u64 = 22;
    pub const LCA_1: u64 = 30;
    pub const LCA_2: u64 = 31;
}

/// How the two cases are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Combine {
    /// Fractional formulas with additive offsets.
    Fractional,
    /// Fractional formulas, plain scaled means.
    FractionalNoOffset,
    /// `|M| + mu(M' + B1)` and `mu(M + B2)`.
    Union,
}

pub(crate) struct CaseOutcome {
    pub mu1: f64,
    pub mu2: f64,
    pub sample: EstimateSample,
    pub witness: Option<Witness>,
}

pub(crate) fn ranks(seed: u64, stream: u64) -> RankFunction {
    RankFunction::new(seed::derive(seed, stream))
}

/// The subgraph on `[0, domain)` read through full list scans.
pub fn materialize<L: ListAccess>(list: &L, domain: usize) -> Result<Graph, Error> {
    let mut edges = Vec::new();
    for v in 0..domain {
        let mut i = 0;
        while let Some(w) = list.list_probe(v, i)? {
            if v < w && w < domain {
                edges.push((v, w));
            }
            i += 1;
        }
    }
    Ok(Graph::from_edges(domain, &edges)?)
}

/// `n X / (2r) - n / (2 ln n)`, or the plain mean when offsets are off.
pub(crate) fn scaled(universe: usize, hits: u64, r: usize, offset: bool) -> f64 {
    let n = universe as f64;
    let mean = n * hits as f64 / (2.0 * r as f64);
    if offset {
        mean - n / (2.0 * ln_floor(n))
    } else {
        mean
    }
}

pub(crate) fn run<L: ListAccess>(
    list: &L,
    domain: usize,
    m: &Matching,
    cfg: &EstimatorConfig,
    seed: u64,
    r: usize,
    combine: Combine,
) -> Result<CaseOutcome, Error> {
    if cfg.exact_reference {
        exact(list, domain, m, cfg, seed, combine)
    } else {
        sampled(list, domain, m, cfg, seed, r, combine)
    }
}

fn fractional(cfg: &EstimatorConfig, m: usize, mu_mp: f64, mu_b1: f64, mu_b2: f64) -> (f64, f64) {
    let kb = cfg.kb();
    let keep = 1.0 - 1.0 / B;
    (m as f64 + keep * mu_mp + mu_b1 / kb, keep * m as f64 + mu_b2 / kb)
}

fn exact<L: ListAccess>(
    list: &L,
    domain: usize,
    m: &Matching,
    cfg: &EstimatorConfig,
    seed: u64,
    combine: Combine,
) -> Result<CaseOutcome, Error> {
    let g = materialize(list, domain)?;
    if cfg.mode == super::Mode::Bipartite {
        if let Err((u, v)) = g.two_coloring() {
            return Err(Error::NotBipartite(u, v));
        }
    }
    let (k, slots) = (cfg.k, cfg.slots());
    let free = g.filter_edges(|u, v| !m.is_matched(u) && !m.is_matched(v));
    let m_prime = gmm(&free, &ranks(seed, tag::INNER_RANKS))?;
    let sides1: Vec<_> = (0..domain)
        .map(|v| match (m.is_matched(v), m_prime.is_matched(v)) {
            (true, _) => None,
            (false, true) => Some(Side::A),
            (false, false) => Some(Side::B),
        })
        .collect();
    let b1 = maximal_bmatching_cross(&g, &sides1, k, slots, &ranks(seed, tag::OUTER_RANKS));
    let sides2: Vec<_> = (0..domain)
        .map(|v| Some(if m.is_matched(v) { Side::A } else { Side::B }))
        .collect();
    let b2 = maximal_bmatching_cross(&g, &sides2, k, slots, &ranks(seed, tag::CASE2_RANKS));

    let mut sample = EstimateSample {
        m_prime_size: Some(m_prime.len()),
        b1_size: Some(b1.size()),
        b2_size: Some(b2.size()),
        mu_m_prime: m_prime.len() as f64,
        mu_b1: b1.size() as f64,
        mu_b2: b2.size() as f64,
        ..EstimateSample::default()
    };
    let (mu1, mu2) = match combine {
        Combine::Union => {
            let h1 = union_graph(domain, m_prime.edges().iter().copied(), &b1)?;
            let h2 = union_graph(domain, m.edges().iter().copied(), &b2)?;
            let (mu_h1, mu_h2) = (max_matching_size(&h1) as f64, max_matching_size(&h2) as f64);
            sample.mu_h1 = Some(mu_h1);
            sample.mu_h2 = Some(mu_h2);
            (m.len() as f64 + mu_h1, mu_h2)
        }
        _ => fractional(cfg, m.len(), sample.mu_m_prime, sample.mu_b1, sample.mu_b2),
    };
    Ok(CaseOutcome {
        mu1,
        mu2,
        sample,
        witness: Some(Witness { m_prime, b1, b2 }),
    })
}

/// Simple graph on the union of a matching and a b-matching.
pub fn union_graph(n: usize, matching: impl Iterator<Item = (Vertex, Vertex)>, b: &BMatching) -> Result<Graph, Error> {
    let mut edges: Vec<_> = matching
        .chain(b.edges().iter().map(|&(u, v, _)| (u, v)))
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::from_edges(n, &edges)?)
}

fn sampled<L: ListAccess>(
    list: &L,
    domain: usize,
    m: &Matching,
    cfg: &EstimatorConfig,
    seed: u64,
    r: usize,
    combine: Combine,
) -> Result<CaseOutcome, Error> {
    let (k, slots) = (cfg.k, cfg.slots());
    let inner = RefCell::new(LocalGreedy::new(
        InducedView::new(list, Unmatched { matching: m, domain }),
        ranks(seed, tag::INNER_RANKS),
    ));
    let outer_view = BipartiteView::new(
        list,
        InnerGreedySides {
            inner: &inner,
            matching: m,
            domain,
        },
        k,
        slots,
    );
    let outer = RefCell::new(LocalGreedy::new(outer_view, ranks(seed, tag::OUTER_RANKS)));
    let case2 = RefCell::new(LocalGreedy::new(
        BipartiteView::new(list, MatchedSides { matching: m, domain }, k, slots),
        ranks(seed, tag::CASE2_RANKS),
    ));

    let mut sample = EstimateSample {
        r,
        ..EstimateSample::default()
    };
    if domain == 0 || r == 0 {
        let (mu1, mu2) = fractional(cfg, m.len(), 0.0, 0.0, 0.0);
        return Ok(CaseOutcome {
            mu1,
            mu2,
            sample,
            witness: None,
        });
    }

    if combine == Combine::Union {
        let delta = 1 + slots as usize;
        let lca = cfg.lca;
        let (inner_layer, outer_layer, case2_layer) =
            (GreedyLayer::new(&inner), GreedyLayer::new(&outer), GreedyLayer::new(&case2));
        let h1 = UnionSubgraphOracle::new(domain, delta, alloc::vec![&inner_layer as &dyn EdgeLayer, &outer_layer]);
        let mu_h1 = estimate_mu_union(&h1, lca, seed::derive(seed, tag::LCA_1), r)?;
        let h2 = UnionSubgraphOracle::new(domain, delta, alloc::vec![m as &dyn EdgeLayer, &case2_layer]);
        let mu_h2 = estimate_mu_union(&h2, lca, seed::derive(seed, tag::LCA_2), r)?;
        sample.mu_h1 = Some(mu_h1);
        sample.mu_h2 = Some(mu_h2);
        return Ok(CaseOutcome {
            mu1: m.len() as f64 + mu_h1,
            mu2: mu_h2,
            sample,
            witness: None,
        });
    }

    let offset = combine == Combine::Fractional;
    let copies = domain * slots as usize;
    let mut rng = seed::rng(seed::derive(seed, tag::SAMPLE_X));
    for _ in 0..r {
        let v = rng.gen_range(0..domain);
        sample.x += inner.borrow_mut().vertex_matched(v)?.matched as u64;
    }
    // A uniform copy slot (v, j) is matched iff the load of v exceeds j.
    let copy_hits = |engine_load: &mut dyn FnMut(Vertex) -> Result<u32, Error>, stream: u64| -> Result<u64, Error> {
        let mut rng = seed::rng(seed::derive(seed, stream));
        let mut hits = 0;
        for _ in 0..r {
            let x = rng.gen_range(0..copies);
            let (v, j) = (x / slots as usize, (x % slots as usize) as u32);
            hits += (engine_load(v)? > j) as u64;
        }
        Ok(hits)
    };
    sample.y = copy_hits(&mut |v| outer.borrow_mut().load(v), tag::SAMPLE_Y)?;
    sample.z = copy_hits(&mut |v| case2.borrow_mut().load(v), tag::SAMPLE_Z)?;
    sample.mu_m_prime = scaled(domain, sample.x, r, offset);
    sample.mu_b1 = scaled(copies, sample.y, r, offset);
    sample.mu_b2 = scaled(copies, sample.z, r, offset);
    let (mu1, mu2) = fractional(cfg, m.len(), sample.mu_m_prime, sample.mu_b1, sample.mu_b2);
    Ok(CaseOutcome {
        mu1,
        mu2,
        sample,
        witness: None,
    })
}

/// Exact `|M'|`, `|B1|`, `|B2|` read off the lazy oracles by querying every
/// vertex; used to cross-check the oracles against the materialized run.
pub fn oracle_sizes<L: ListAccess>(
    list: &L,
    domain: usize,
    m: &Matching,
    k: u32,
    slots: u32,
    seed: u64,
) -> Result<(usize, u64, u64), Error> {
    let inner = RefCell::new(LocalGreedy::new(
        InducedView::new(list, Unmatched { matching: m, domain }),
        ranks(seed, tag::INNER_RANKS),
    ));
    let sides = InnerGreedySides {
        inner: &inner,
        matching: m,
        domain,
    };
    let mut outer = LocalGreedy::new(BipartiteView::new(list, &sides, k, slots), ranks(seed, tag::OUTER_RANKS));
    let mut case2 = LocalGreedy::new(
        BipartiteView::new(list, MatchedSides { matching: m, domain }, k, slots),
        ranks(seed, tag::CASE2_RANKS),
    );
    let (mut mp, mut b1, mut b2) = (0, 0u64, 0u64);
    for v in 0..domain {
        mp += inner.borrow_mut().vertex_matched(v)?.matched as usize;
        b1 += outer.load(v)? as u64;
        b2 += case2.load(v)? as u64;
    }
    Ok((mp / 2, b1 / 2, b2 / 2))
}
