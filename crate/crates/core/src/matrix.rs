//! Adjacency-list access to the reduction graph `H` built over an
//! adjacency-matrix oracle.
//!
//! `H` has two copies `V1`, `V2` of the vertex set and, for every vertex `j`,
//! a private block `U_j` of `n * ceil(ln^2 n)` pendant vertices. `V1`–`V1` and
//! `V2`–`V2` edges copy the edges of `G`, `V1`–`V2` edges its non-edges
//! (including `(v, v)`), and vertex `j` of `V2` is joined to all of `U_j`.
//! Degrees are fixed by class, and the `i`-th neighbour of any vertex costs at
//! most one matrix probe, so `H` is never materialized.
//!
//! Virtual ids: `V1 = [0, n)`, `V2 = [n, 2n)`, `U_j = 2n + j * block + t`.
use crate::access::{ListAccess, MatrixOracle};
use crate::error::Error;
use crate::graph::Vertex;
use crate::matching::Matching;
use crate::stats::OracleStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixVertex {
    Primary(Vertex),
    Mirror(Vertex),
    Pendant { owner: Vertex, index: usize },
}

/// `ceil(ln^2 n)`, at least 1.
pub fn log_squared_ceil(n: usize) -> usize {
    let l = libm::log(n.max(2) as f64);
    (libm::ceil(l * l) as usize).max(1)
}

pub struct MatrixToListView<'g> {
    oracle: MatrixOracle<'g>,
    n: usize,
    block: usize,
}

impl<'g> MatrixToListView<'g> {
    pub fn new(oracle: MatrixOracle<'g>) -> Self {
        let n = oracle.vertex_count();
        MatrixToListView {
            oracle,
            n,
            block: n * log_squared_ceil(n),
        }
    }

    /// Vertex count of the underlying graph.
    pub fn base_count(&self) -> usize {
        self.n
    }

    /// Size of each pendant block `U_j`.
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn encode(&self, x: MatrixVertex) -> Vertex {
        match x {
            MatrixVertex::Primary(v) => v,
            MatrixVertex::Mirror(v) => self.n + v,
            MatrixVertex::Pendant { owner, index } => 2 * self.n + owner * self.block + index,
        }
    }

    pub fn decode(&self, x: Vertex) -> Result<MatrixVertex, Error> {
        let n = self.n;
        if x < n {
            Ok(MatrixVertex::Primary(x))
        } else if x < 2 * n {
            Ok(MatrixVertex::Mirror(x - n))
        } else if x < self.vertex_count() {
            let t = x - 2 * n;
            Ok(MatrixVertex::Pendant {
                owner: t / self.block,
                index: t % self.block,
            })
        } else {
            Err(Error::InvalidVertex {
                vertex: x,
                count: self.vertex_count(),
            })
        }
    }

    fn owner(&self, x: MatrixVertex) -> Vertex {
        match x {
            MatrixVertex::Primary(v) | MatrixVertex::Mirror(v) => v,
            MatrixVertex::Pendant { owner, .. } => owner,
        }
    }

    /// Closed-form degree of a virtual vertex.
    pub fn class_degree(&self, x: MatrixVertex) -> usize {
        match x {
            MatrixVertex::Primary(_) => self.n,
            MatrixVertex::Mirror(_) => self.n + self.block,
            MatrixVertex::Pendant { .. } => 1,
        }
    }

    /// Processing order for the sparsifier: all of `V2`, then `V1`.
    pub fn mirror_first_order(&self) -> impl Iterator<Item = Vertex> {
        let n = self.n;
        (n..2 * n).chain(0..n)
    }

    /// Vertices of `V2` that `m` matches outside their own pendant block.
    pub fn mirror_escapes(&self, m: &Matching) -> usize {
        (self.n..2 * self.n)
            .filter(|&x| match m.partner(x).map(|p| self.decode(p)) {
                Some(Ok(MatrixVertex::Pendant { .. })) | None => false,
                Some(_) => true,
            })
            .count()
    }
}

impl ListAccess for MatrixToListView<'_> {
    fn vertex_count(&self) -> usize {
        2 * self.n + self.n * self.block
    }

    fn list_probe(&self, x: Vertex, i: usize) -> Result<Option<Vertex>, Error> {
        let cls = self.decode(x)?;
        self.oracle.stats().record_list_probe(self.owner(cls));
        let n = self.n;
        Ok(match cls {
            MatrixVertex::Primary(v) if i < n => {
                Some(if self.oracle.matrix_probe(v, i)? { i } else { n + i })
            }
            MatrixVertex::Mirror(v) if i < n => {
                Some(if self.oracle.matrix_probe(v, i)? { n + i } else { i })
            }
            MatrixVertex::Mirror(v) if i < n + self.block => Some(self.encode(MatrixVertex::Pendant {
                owner: v,
                index: i - n,
            })),
            MatrixVertex::Pendant { owner, .. } if i == 0 => Some(n + owner),
            _ => None,
        })
    }

    fn stats(&self) -> &OracleStats {
        self.oracle.stats()
    }

    fn degree_bound(&self, x: Vertex) -> usize {
        self.decode(x).map(|c| self.class_degree(c)).unwrap_or(0)
    }

    fn degree(&self, x: Vertex) -> Result<usize, Error> {
        Ok(self.class_degree(self.decode(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::testutil::erdos_renyi;

    fn setup(g: &Graph) -> OracleStats {
        OracleStats::new(g.vertex_count())
    }

    #[test]
    fn pendant_has_single_free_neighbour() {
        let g = erdos_renyi(10, 0.3, 1);
        let stats = setup(&g);
        let h = MatrixToListView::new(MatrixOracle::new(&g, &stats));
        let u = h.encode(MatrixVertex::Pendant { owner: 3, index: 7 });
        assert_eq!(h.list_probe(u, 0).unwrap(), Some(13));
        assert_eq!(h.list_probe(u, 1).unwrap(), None);
        assert_eq!(stats.matrix_probes(), 0);
    }

    #[test]
    fn primary_follows_edges_with_one_probe() {
        let g = Graph::from_edges(4, &[(0, 2)]).unwrap();
        let stats = setup(&g);
        let h = MatrixToListView::new(MatrixOracle::new(&g, &stats));
        assert_eq!(h.list_probe(0, 2).unwrap(), Some(2));
        assert_eq!(stats.matrix_probes(), 1);
        assert_eq!(h.list_probe(0, 1).unwrap(), Some(5));
        assert_eq!(h.list_probe(0, 0).unwrap(), Some(4));
        assert_eq!(stats.matrix_probes(), 3);
        assert_eq!(h.list_probe(0, 4).unwrap(), None);
        assert_eq!(stats.matrix_probes(), 3);
        assert_eq!(h.list_probe(6, 2).unwrap(), Some(2));
        assert_eq!(h.list_probe(6, 0).unwrap(), Some(4));
    }

    #[test]
    fn degree_table_and_symmetry() {
        let g = erdos_renyi(7, 0.4, 5);
        let stats = setup(&g);
        let h = MatrixToListView::new(MatrixOracle::new(&g, &stats));
        let block = 7 * log_squared_ceil(7);
        assert_eq!(h.block(), block);
        for x in 0..h.vertex_count() {
            let mut d = 0;
            while let Some(y) = h.list_probe(x, d).unwrap() {
                let mut back = 0;
                let mut found = false;
                while let Some(z) = h.list_probe(y, back).unwrap() {
                    found |= z == x;
                    back += 1;
                }
                assert!(found, "{x} -> {y} not mirrored");
                d += 1;
            }
            let expected = match h.decode(x).unwrap() {
                MatrixVertex::Primary(_) => 7,
                MatrixVertex::Mirror(_) => 7 + block,
                MatrixVertex::Pendant { .. } => 1,
            };
            assert_eq!(d, expected);
            assert_eq!(h.degree(x).unwrap(), expected);
            if x > 2 * 7 + 40 {
                break;
            }
        }
    }
}
