use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    OutOfRange(Vertex, Vertex, usize),
    #[error("duplicate edge ({0}, {1})")]
    Duplicate(Vertex, Vertex),
}

/// Immutable simple undirected graph.
///
/// Adjacency lists keep the order in which edges were supplied; that order is
/// what the list oracle exposes. A sorted copy backs edge-existence queries.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<Vertex>,
    sorted: Vec<Vertex>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            adjacency: Vec::new(),
            sorted: Vec::new(),
            edge_count: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, out-of-range endpoints and
    /// duplicate edges (in either orientation).
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adjacency = vec![0; 2 * edges.len()];
        for &(u, v) in edges {
            adjacency[fill[u]] = v;
            fill[u] += 1;
            adjacency[fill[v]] = u;
            fill[v] += 1;
        }
        let mut sorted = adjacency.clone();
        for v in 0..n {
            let list = &mut sorted[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::Duplicate(v.min(w[0]), v.max(w[0])));
            }
        }
        Ok(Graph {
            offsets,
            adjacency,
            sorted,
            edge_count: edges.len(),
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// The `i`-th entry of `v`'s adjacency list, if any.
    #[inline]
    pub fn neighbor(&self, v: Vertex, i: usize) -> Option<Vertex> {
        self.neighbors(v).get(i).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        self.sorted[self.offsets[u]..self.offsets[u + 1]]
            .binary_search(&v)
            .is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, grouped by the smaller endpoint.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        let n = self.vertex_count();
        if n == 0 {
            0.0
        } else {
            2.0 * self.edge_count as f64 / n as f64
        }
    }

    /// Same vertex set, keeping only edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Graph {
        let kept: Vec<_> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_edges(self.vertex_count(), &kept).expect("subgraph of a valid graph")
    }

    /// Proper two-colouring (`false`/`true` per vertex), or an edge closing an
    /// odd cycle.
    pub fn two_coloring(&self) -> Result<Vec<bool>, (Vertex, Vertex)> {
        let n = self.vertex_count();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in self.neighbors(u) {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return Err((u, w)),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn empty_and_cycle() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert!((0..3).all(|v| g.degree(v) == 0));
        let c = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!((0..4).all(|v| c.degree(v) == 2));
        assert_eq!(c.neighbors(0), &[1, 3]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(2, &[(1, 1)]).unwrap_err(), GraphError::SelfLoop(1));
        assert!(matches!(Graph::from_edges(2, &[(0, 2)]), Err(GraphError::OutOfRange(..))));
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]).unwrap_err(),
            GraphError::Duplicate(0, 1)
        );
    }

    #[test]
    fn odd_cycle_is_not_bipartite() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!tri.is_bipartite());
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.two_coloring().unwrap(), vec![false, true, false]);
    }

    #[test]
    fn symmetric_lists_and_degree_sum() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (3, 1), (4, 2), (3, 4)]).unwrap();
        let mut sum = 0;
        for u in 0..5 {
            sum += g.degree(u);
            for &v in g.neighbors(u) {
                assert!(g.neighbors(v).contains(&u));
                assert!(g.has_edge(u, v) && g.has_edge(v, u));
            }
        }
        assert_eq!(sum, 2 * g.edge_count());
        assert!(!g.has_edge(0, 0));
    }
}
