//! Query oracles over a [`Graph`].

use crate::error::Error;
use crate::graph::{Graph, Vertex};
use crate::stats::OracleStats;

/// Adjacency-list access: the `i`-th neighbour of `v` (0-based), or `None`
/// past the end of the list. Implementations count every probe.
pub trait ListAccess {
    fn vertex_count(&self) -> usize;

    fn list_probe(&self, v: Vertex, i: usize) -> Result<Option<Vertex>, Error>;

    fn stats(&self) -> &OracleStats;

    /// Upper bound on any degree, used to bound the degree search.
    fn degree_bound(&self, _v: Vertex) -> usize {
        self.vertex_count().saturating_sub(1)
    }

    fn degree(&self, v: Vertex) -> Result<usize, Error> {
        degree_via_binary_search(self, v)
    }
}

impl<T: ListAccess + ?Sized> ListAccess for &T {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn list_probe(&self, v: Vertex, i: usize) -> Result<Option<Vertex>, Error> {
        (**self).list_probe(v, i)
    }
    fn stats(&self) -> &OracleStats {
        (**self).stats()
    }
    fn degree_bound(&self, v: Vertex) -> usize {
        (**self).degree_bound(v)
    }
    fn degree(&self, v: Vertex) -> Result<usize, Error> {
        (**self).degree(v)
    }
}

/// Exact degree of `v` from list probes alone.
///
/// The degree `d` is the first index whose probe is `None`; searching
/// `[0, bound]` takes at most `ceil(log2(bound + 1))` probes.
pub fn degree_via_binary_search<L: ListAccess + ?Sized>(list: &L, v: Vertex) -> Result<usize, Error> {
    if v >= list.vertex_count() {
        return Err(Error::InvalidVertex {
            vertex: v,
            count: list.vertex_count(),
        });
    }
    let (mut lo, mut hi) = (0usize, list.degree_bound(v));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if list.list_probe(v, mid)?.is_some() {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Adjacency-list oracle over an in-memory graph.
#[derive(Debug, Clone, Copy)]
pub struct ListOracle<'g> {
    graph: &'g Graph,
    stats: &'g OracleStats,
}

impl<'g> ListOracle<'g> {
    pub fn new(graph: &'g Graph, stats: &'g OracleStats) -> Self {
        debug_assert!(stats.vertex_count() >= graph.vertex_count());
        ListOracle { graph, stats }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }
}

impl ListAccess for ListOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn list_probe(&self, v: Vertex, i: usize) -> Result<Option<Vertex>, Error> {
        if v >= self.graph.vertex_count() {
            return Err(Error::InvalidVertex {
                vertex: v,
                count: self.graph.vertex_count(),
            });
        }
        self.stats.record_list_probe(v);
        Ok(self.graph.neighbor(v, i))
    }

    fn stats(&self) -> &OracleStats {
        self.stats
    }
}

/// Adjacency-matrix oracle: edge existence of `(u, v)`.
#[derive(Debug, Clone, Copy)]
pub struct MatrixOracle<'g> {
    graph: &'g Graph,
    stats: &'g OracleStats,
}

impl<'g> MatrixOracle<'g> {
    pub fn new(graph: &'g Graph, stats: &'g OracleStats) -> Self {
        MatrixOracle { graph, stats }
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn stats(&self) -> &'g OracleStats {
        self.stats
    }

    pub fn matrix_probe(&self, u: Vertex, v: Vertex) -> Result<bool, Error> {
        let n = self.graph.vertex_count();
        for x in [u, v] {
            if x >= n {
                return Err(Error::InvalidVertex { vertex: x, count: n });
            }
        }
        self.stats.record_matrix_probe();
        Ok(self.graph.has_edge(u, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{complete, erdos_renyi};

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn list_probe_reports_entries_and_null() {
        let g = path3();
        let stats = OracleStats::new(3);
        let list = ListOracle::new(&g, &stats);
        assert_eq!(list.list_probe(1, 0).unwrap(), Some(0));
        assert_eq!(list.list_probe(1, 5).unwrap(), None);
        assert_eq!(list.list_probe(1, 1).unwrap(), list.list_probe(1, 1).unwrap());
        assert_eq!(stats.list_probes(), 4);
        assert_eq!(stats.vertex_list_probes(1), 4);
        assert!(matches!(list.list_probe(3, 0), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn matrix_probe_answers_edges() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let stats = OracleStats::new(3);
        let m = MatrixOracle::new(&g, &stats);
        assert!(m.matrix_probe(0, 1).unwrap());
        assert!(m.matrix_probe(1, 0).unwrap());
        assert!(!m.matrix_probe(0, 2).unwrap());
        assert!(!m.matrix_probe(2, 2).unwrap());
        assert_eq!(stats.matrix_probes(), 4);
        assert!(m.matrix_probe(0, 7).is_err());
    }

    fn probe_limit(n: usize) -> u64 {
        (usize::BITS - (n.max(1) - 1).leading_zeros()) as u64 + 1
    }

    #[test]
    fn binary_search_degree_isolated_and_complete() {
        let g = Graph::from_edges(9, &[(1, 2)]).unwrap();
        let stats = OracleStats::new(9);
        let list = ListOracle::new(&g, &stats);
        assert_eq!(degree_via_binary_search(&list, 0).unwrap(), 0);
        assert!(stats.list_probes() <= probe_limit(9));

        let k = complete(12);
        let stats = OracleStats::new(12);
        let list = ListOracle::new(&k, &stats);
        assert_eq!(degree_via_binary_search(&list, 5).unwrap(), 11);
        assert!(stats.list_probes() <= probe_limit(12));
    }

    #[test]
    fn binary_search_matches_stored_degree() {
        for seed in 0..20 {
            let g = erdos_renyi(37, 0.2, seed);
            let stats = OracleStats::new(g.vertex_count());
            let list = ListOracle::new(&g, &stats);
            for v in 0..g.vertex_count() {
                let before = stats.list_probes();
                assert_eq!(degree_via_binary_search(&list, v).unwrap(), g.degree(v));
                assert!(stats.list_probes() - before <= probe_limit(37));
            }
        }
    }
}
