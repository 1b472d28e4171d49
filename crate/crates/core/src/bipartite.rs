//! Bipartite views `G[A, B]` with capacities, and their duplicated form.
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::access::ListAccess;
use crate::error::Error;
use crate::exact::Side;
use crate::graph::Vertex;
use crate::local::LocalGreedy;
use crate::matching::Matching;
use crate::rank::{EdgeKey, RankFunction};
use crate::stats::OracleStats;
use crate::view::CapView;

/// Side assignment of the vertices of a bipartite view.
pub trait SideOracle {
    fn side(&self, v: Vertex) -> Result<Option<Side>, Error>;
}

impl<S: SideOracle + ?Sized> SideOracle for &S {
    fn side(&self, v: Vertex) -> Result<Option<Side>, Error> {
        (**self).side(v)
    }
}

/// `A = V(M)`, `B` = the other vertices below `domain`. Each lookup is O(1).
#[derive(Debug, Clone, Copy)]
pub struct MatchedSides<'m> {
    pub matching: &'m Matching,
    pub domain: usize,
}

impl SideOracle for MatchedSides<'_> {
    fn side(&self, v: Vertex) -> Result<Option<Side>, Error> {
        Ok((v < self.domain).then(|| if self.matching.is_matched(v) { Side::A } else { Side::B }))
    }
}

/// Among the vertices below `domain` that `M` leaves free: `A` are those the
/// inner greedy matches, `B` the rest. Every lookup queries the inner oracle.
pub struct InnerGreedySides<'a, V> {
    pub inner: &'a RefCell<LocalGreedy<V>>,
    pub matching: &'a Matching,
    pub domain: usize,
}

impl<V: CapView> SideOracle for InnerGreedySides<'_, V> {
    fn side(&self, v: Vertex) -> Result<Option<Side>, Error> {
        if v >= self.domain || self.matching.is_matched(v) {
            return Ok(None);
        }
        let matched = self.inner.borrow_mut().vertex_matched(v)?.matched;
        Ok(Some(if matched { Side::A } else { Side::B }))
    }
}

/// Explicit side table.
impl SideOracle for [Option<Side>] {
    fn side(&self, v: Vertex) -> Result<Option<Side>, Error> {
        Ok(self.get(v).copied().flatten())
    }
}

/// `G[A, B]` over a list oracle, with capacity `cap_a` on `A` and `cap_b` on
/// `B`. Only edges across the two sides are visible.
pub struct BipartiteView<L, S> {
    base: L,
    sides: S,
    cap_a: u32,
    cap_b: u32,
}

impl<L: ListAccess, S: SideOracle> BipartiteView<L, S> {
    pub fn new(base: L, sides: S, cap_a: u32, cap_b: u32) -> Self {
        BipartiteView { base, sides, cap_a, cap_b }
    }

    pub fn side(&self, v: Vertex) -> Result<Option<Side>, Error> {
        self.sides.side(v)
    }

    pub fn capacities(&self) -> (u32, u32) {
        (self.cap_a, self.cap_b)
    }
}

impl<L: ListAccess, S: SideOracle> CapView for BipartiteView<L, S> {
    fn universe(&self) -> usize {
        self.base.vertex_count()
    }

    fn capacity(&self, v: Vertex) -> Result<u32, Error> {
        Ok(match self.sides.side(v)? {
            Some(Side::A) => self.cap_a,
            Some(Side::B) => self.cap_b,
            None => 0,
        })
    }

    fn neighbors(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        let Some(s) = self.sides.side(v)? else { return Ok(()) };
        let other = Some(s.opposite());
        let mut i = 0;
        while let Some(w) = self.base.list_probe(v, i)? {
            if self.sides.side(w)? == other {
                out.push(w);
            }
            i += 1;
        }
        Ok(())
    }

    fn stats(&self) -> &OracleStats {
        self.base.stats()
    }
}

/// Copy `copy` of base vertex `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexCopy {
    pub vertex: Vertex,
    pub copy: u32,
}

/// A capacitated view where every vertex `v` is replaced by `capacity(v)`
/// copies and every edge `(u, v)` by all copy pairs.
///
/// Virtual ids are `v * slots + j` over a padded universe of
/// `universe * slots` ids; ids with `j >= capacity(v)` are isolated. Copy
/// edges rank by `(base key, copy of the smaller endpoint, copy of the
/// larger)`, under which the greedy maximal matching of this view takes the
/// copies of `v` in prefix order: copy `j` is matched iff the greedy
/// b-matching load of `v` exceeds `j`.
pub struct DuplicatedBipartiteView<V> {
    base: V,
    slots: u32,
}

impl<V: CapView> DuplicatedBipartiteView<V> {
    pub fn new(base: V, slots: u32) -> Self {
        assert!(slots > 0, "a duplicated view needs at least one slot");
        DuplicatedBipartiteView { base, slots }
    }

    pub fn base(&self) -> &V {
        &self.base
    }

    pub fn slots(&self) -> u32 {
        self.slots
    }

    pub fn virtual_count(&self) -> usize {
        self.base.universe() * self.slots as usize
    }

    pub fn encode(&self, c: VertexCopy) -> Vertex {
        c.vertex * self.slots as usize + c.copy as usize
    }

    pub fn decode(&self, x: Vertex) -> VertexCopy {
        VertexCopy {
            vertex: x / self.slots as usize,
            copy: (x % self.slots as usize) as u32,
        }
    }

    /// Whether `x` is a real copy (not padding).
    pub fn exists(&self, x: Vertex) -> Result<bool, Error> {
        let c = self.decode(x);
        Ok(c.copy < self.base.capacity(c.vertex)?)
    }

    /// All virtual neighbours of `x`.
    pub fn virtual_neighbors(&self, x: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        if !self.exists(x)? {
            return Ok(());
        }
        let mut base = Vec::new();
        self.base.neighbors(self.decode(x).vertex, &mut base)?;
        for w in base {
            for j in 0..self.base.capacity(w)? {
                out.push(self.encode(VertexCopy { vertex: w, copy: j }));
            }
        }
        Ok(())
    }

    /// Rank key of the virtual edge `(x, y)`.
    pub fn virtual_key(&self, ranks: &RankFunction, x: Vertex, y: Vertex) -> (EdgeKey, u32, u32) {
        let (a, b) = (self.decode(x), self.decode(y));
        let (lo, hi) = if a.vertex < b.vertex { (a, b) } else { (b, a) };
        (ranks.key(a.vertex, b.vertex), lo.copy, hi.copy)
    }

    /// Whether virtual vertex `x` is matched, read off the capacitated greedy
    /// running on the base view.
    pub fn copy_matched(&self, engine: &mut LocalGreedy<V>, x: Vertex) -> Result<bool, Error> {
        if !self.exists(x)? {
            return Ok(false);
        }
        let c = self.decode(x);
        Ok(engine.load(c.vertex)? > c.copy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::ListOracle;
    use crate::exact::gmm_by_key;
    use crate::graph::Graph;
    use crate::testutil::*;
    use alloc::vec;

    fn materialize<V: CapView>(d: &DuplicatedBipartiteView<V>) -> Graph {
        let mut edges = Vec::new();
        let mut out = Vec::new();
        for x in 0..d.virtual_count() {
            out.clear();
            d.virtual_neighbors(x, &mut out).unwrap();
            edges.extend(out.iter().filter(|&&y| x < y).map(|&y| (x, y)));
        }
        Graph::from_edges(d.virtual_count(), &edges).unwrap()
    }

    #[test]
    fn copy_counts_and_encoding() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let stats = OracleStats::new(3);
        let m = Matching::from_edges([(0, 1)]).unwrap();
        let view = BipartiteView::new(ListOracle::new(&g, &stats), MatchedSides { matching: &m, domain: 3 }, 2, 5);
        let d = DuplicatedBipartiteView::new(&view, 5);
        let copies: Vec<u32> = (0..3).map(|v| (0..5).filter(|&j| d.exists(v * 5 + j).unwrap()).count() as u32).collect();
        assert_eq!(copies, vec![2, 2, 5]);
        let c = VertexCopy { vertex: 2, copy: 3 };
        assert_eq!(d.decode(d.encode(c)), c);
        let mut out = Vec::new();
        d.virtual_neighbors(d.encode(c), &mut out).unwrap();
        assert_eq!(out, vec![5, 6]);
    }

    #[test]
    fn view_matching_projects_to_maximal_bmatching() {
        for seed in 0..40u64 {
            let g = random_bipartite(16, 0.3, seed);
            let side: Vec<Option<Side>> = (0..16).map(|v| Some(if v < 8 { Side::A } else { Side::B })).collect();
            let stats = OracleStats::new(16);
            let view = BipartiteView::new(ListOracle::new(&g, &stats), &side[..], 2, 3);
            let d = DuplicatedBipartiteView::new(&view, 3);
            let big = materialize(&d);
            let r = RankFunction::new(seed);
            let virt = gmm_by_key(&big, |x, y| d.virtual_key(&r, x, y));
            let mut load = [0u32; 16];
            for &(x, y) in virt.edges() {
                load[d.decode(x).vertex] += 1;
                load[d.decode(y).vertex] += 1;
            }
            for v in 0..16 {
                assert!(load[v] <= view.capacity(v).unwrap());
            }
            for (u, v) in g.edges() {
                let unsat = |p: usize| load[p] < view.capacity(p).unwrap();
                assert!(!(unsat(u) && unsat(v)), "edge ({u},{v}) left free");
            }
            let mut engine = LocalGreedy::new(&view, r);
            for x in 0..d.virtual_count() {
                assert_eq!(d.copy_matched(&mut engine, x).unwrap(), virt.is_matched(x));
            }
        }
    }
}
