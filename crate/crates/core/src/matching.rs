use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::error::Error;
use crate::graph::{Graph, Vertex};

/// A set of vertex-disjoint edges with a partner index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(Vertex, Vertex)>,
    mate: HashMap<Vertex, Vertex>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, Error> {
        let mut m = Matching::new();
        for (u, v) in edges {
            m.insert(u, v)?;
        }
        Ok(m)
    }

    /// Adds `(u, v)`; fails if either endpoint is already covered.
    pub fn insert(&mut self, u: Vertex, v: Vertex) -> Result<(), Error> {
        for x in [u, v] {
            if self.mate.contains_key(&x) {
                return Err(Error::InvalidMatching(x));
            }
        }
        if u == v {
            return Err(Error::InvalidMatching(u));
        }
        self.mate.insert(u, v);
        self.mate.insert(v, u);
        self.edges.push((u.min(v), u.max(v)));
        Ok(())
    }

    #[inline]
    pub fn is_matched(&self, v: Vertex) -> bool {
        self.mate.contains_key(&v)
    }

    #[inline]
    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        self.mate.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges as `(min, max)` in insertion order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.mate.keys().copied()
    }

    /// Keeps only the edges accepted by `keep`.
    pub fn retain(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Matching {
        Matching::from_edges(self.edges.iter().copied().filter(|&(u, v)| keep(u, v)))
            .expect("subset of a matching")
    }

    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| u < g.vertex_count() && v < g.vertex_count() && g.has_edge(u, v))
    }

    /// No edge of `g` has both endpoints uncovered.
    pub fn is_maximal_in(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.is_matched(u) || self.is_matched(v))
    }
}

/// An edge multiset with per-vertex capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatching {
    edges: Vec<(Vertex, Vertex, u32)>,
    load: Vec<u32>,
    capacity: Vec<u32>,
}

impl BMatching {
    pub fn new(capacity: Vec<u32>) -> Self {
        BMatching {
            edges: Vec::new(),
            load: alloc::vec![0; capacity.len()],
            capacity,
        }
    }

    pub fn residual(&self, v: Vertex) -> u32 {
        self.capacity[v] - self.load[v]
    }

    /// Adds `multiplicity` copies of `(u, v)`.
    pub fn add(&mut self, u: Vertex, v: Vertex, multiplicity: u32) -> Result<(), Error> {
        if multiplicity == 0 {
            return Ok(());
        }
        for x in [u, v] {
            if self.load[x] + multiplicity > self.capacity[x] {
                return Err(Error::InvalidMatching(x));
            }
        }
        self.load[u] += multiplicity;
        self.load[v] += multiplicity;
        self.edges.push((u, v, multiplicity));
        Ok(())
    }

    pub fn load(&self, v: Vertex) -> u32 {
        self.load[v]
    }

    pub fn capacity(&self, v: Vertex) -> u32 {
        self.capacity[v]
    }

    /// Total multiplicity.
    pub fn size(&self) -> u64 {
        self.edges.iter().map(|&(_, _, m)| m as u64).sum()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex, u32)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.load.len()
    }

    /// Distinct partners of `v`.
    pub fn partners(&self, v: Vertex) -> Vec<Vertex> {
        self.edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        let mut load = alloc::vec![0u32; self.load.len()];
        for &(u, v, m) in &self.edges {
            load[u] += m;
            load[v] += m;
        }
        load == self.load && self.load.iter().zip(&self.capacity).all(|(l, c)| l <= c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_rejects_shared_endpoints() {
        let mut m = Matching::new();
        m.insert(0, 1).unwrap();
        assert_eq!(m.insert(1, 2), Err(Error::InvalidMatching(1)));
        assert_eq!(m.partner(1), Some(0));
        assert!(!m.is_matched(2));
        assert_eq!(m.edges(), &[(0, 1)]);
    }

    #[test]
    fn bmatching_tracks_loads() {
        let mut b = BMatching::new(alloc::vec![2, 5, 1]);
        b.add(0, 1, 2).unwrap();
        assert_eq!(b.size(), 2);
        assert_eq!(b.residual(1), 3);
        assert!(b.add(0, 2, 1).is_err());
        assert!(b.is_consistent());
        assert_eq!(b.partners(1), alloc::vec![0]);
    }
}
