//! The preprocessing matching: every free vertex samples up to `c` random
//! neighbours and matches to the first free one.
use alloc::vec::Vec;

use rand::Rng;

use crate::access::ListAccess;
use crate::error::Error;
use crate::graph::{Graph, Vertex};
use crate::matching::Matching;
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifierConfig {
    /// Samples per vertex.
    pub c: usize,
    /// Processing order; `None` means `0..n`.
    pub order: Option<Vec<Vertex>>,
}

impl SparsifierConfig {
    /// `c = ceil(2 sqrt(n) ln n)`, at least 1.
    pub fn for_vertex_count(n: usize) -> Self {
        SparsifierConfig {
            c: default_budget(n),
            order: None,
        }
    }
}

pub fn default_budget(n: usize) -> usize {
    let n = n as f64;
    (libm::ceil(2.0 * libm::sqrt(n) * libm::log(n.max(1.0))) as usize).max(1)
}

/// Sampling is with replacement; degrees come from binary search, and
/// vertices of degree 0 are skipped.
pub fn sparsify<L: ListAccess>(list: &L, cfg: &SparsifierConfig, seed: u64) -> Result<Matching, Error> {
    if cfg.c == 0 {
        return Err(Error::Config("sparsifier budget must be positive".into()));
    }
    let mut rng = seed::rng(seed);
    let mut m = Matching::new();
    let mut visit = |v: Vertex, m: &mut Matching| -> Result<(), Error> {
        if m.is_matched(v) {
            return Ok(());
        }
        let d = list.degree(v)?;
        if d == 0 {
            return Ok(());
        }
        for _ in 0..cfg.c {
            let w = list.list_probe(v, rng.gen_range(0..d))?.expect("index below the degree");
            if !m.is_matched(w) {
                m.insert(v, w)?;
                break;
            }
        }
        Ok(())
    };
    match &cfg.order {
        Some(order) => order.iter().try_for_each(|&v| visit(v, &mut m))?,
        None => (0..list.vertex_count()).try_for_each(|v| visit(v, &mut m))?,
    }
    Ok(m)
}

/// Maximum degree of `G[V \ V(M)]`, by a full scan.
pub fn residual_degree_check(g: &Graph, m: &Matching) -> usize {
    (0..g.vertex_count())
        .filter(|&v| !m.is_matched(v))
        .map(|v| g.neighbors(v).iter().filter(|&&w| !m.is_matched(w)).count())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::ListOracle;
    use crate::stats::OracleStats;
    use crate::testutil::*;

    fn run(g: &Graph, seed: u64) -> (Matching, u64) {
        let stats = OracleStats::new(g.vertex_count());
        let list = ListOracle::new(g, &stats);
        let m = sparsify(&list, &SparsifierConfig::for_vertex_count(g.vertex_count()), seed).unwrap();
        (m, stats.list_probes())
    }

    #[test]
    fn empty_star_and_perfect_matching() {
        assert!(run(&Graph::empty(5), 0).0.is_empty());
        for seed in 0..20 {
            assert_eq!(run(&star(30), seed).0.len(), 1);
            let g = disjoint_matching(40);
            let (m, _) = run(&g, seed);
            assert_eq!(m.len(), 20);
            assert_eq!(residual_degree_check(&g, &m), 0);
        }
    }

    #[test]
    fn valid_within_budget_and_sparse_residual() {
        let n = 400;
        let g = complete(n);
        let c = SparsifierConfig::for_vertex_count(n).c as u64;
        let log = (usize::BITS - (n - 1).leading_zeros()) as u64;
        for seed in 0..30 {
            let (m, probes) = run(&g, seed);
            assert!(m.is_subgraph_of(&g));
            assert!(probes <= n as u64 * (c + log + 1));
            assert!(residual_degree_check(&g, &m) <= 20);
        }
    }

    #[test]
    fn default_budget_values() {
        assert_eq!(default_budget(1), 1);
        assert_eq!(default_budget(400), 240);
    }
}
