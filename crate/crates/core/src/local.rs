//! Local oracle for the random greedy maximal (b-)matching.
//!
//! The greedy scans edges by increasing rank and gives each edge `e = (u, v)`
//! multiplicity `x(e) = min(res_u(e), res_v(e))`, where `res_p(e)` is the
//! capacity of `p` minus the multiplicities of lower-ranked edges at `p`.
//! With unit capacities this is the plain greedy maximal matching. With
//! capacities `k` and `ceil(kb)` it is the greedy maximal matching of the
//! graph with every vertex duplicated, ranking copy edges by
//! `(base rank, copy indices)`.
//!
//! [`LocalGreedy`] evaluates `x(e)` on demand: only edges of lower rank that
//! share an endpoint are examined, merged in rank order from both ends, and
//! the scan stops as soon as either endpoint saturates. Results are memoized
//! for the lifetime of the engine, so one engine is one consistent run.
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rand::Rng;

use crate::error::Error;
use crate::graph::Vertex;
use crate::rank::{EdgeKey, RankFunction};
use crate::seed;
use crate::view::CapView;

/// Answer to "is `v` matched?".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleAnswer {
    pub matched: bool,
    pub partner: Option<Vertex>,
    /// List and matrix probes spent on this call.
    pub probes_used: u64,
}

struct Frame {
    u: Vertex,
    v: Vertex,
    key: EdgeKey,
    next_u: usize,
    next_v: usize,
    load_u: u32,
    load_v: u32,
}

/// Lazy greedy (b-)matching over a [`CapView`] under a fixed rank function.
pub struct LocalGreedy<V> {
    view: V,
    ranks: RankFunction,
    adjacency: HashMap<Vertex, (u32, Vec<(EdgeKey, Vertex)>)>,
    memo: HashMap<(Vertex, Vertex), u32>,
    buf: Vec<Vertex>,
}

impl<V: CapView> LocalGreedy<V> {
    pub fn new(view: V, ranks: RankFunction) -> Self {
        LocalGreedy {
            view,
            ranks,
            adjacency: HashMap::new(),
            memo: HashMap::new(),
            buf: Vec::new(),
        }
    }

    pub fn view(&self) -> &V {
        &self.view
    }

    pub fn ranks(&self) -> &RankFunction {
        &self.ranks
    }

    /// Number of edges whose multiplicity has been resolved.
    pub fn resolved_edges(&self) -> usize {
        self.memo.len()
    }

    fn probes(&self) -> u64 {
        let s = self.view.stats();
        s.list_probes() + s.matrix_probes()
    }

    fn ensure(&mut self, v: Vertex) -> Result<(), Error> {
        if self.adjacency.contains_key(&v) {
            return Ok(());
        }
        let cap = self.view.capacity(v)?;
        self.buf.clear();
        if cap > 0 {
            self.view.neighbors(v, &mut self.buf)?;
        }
        let ranks = self.ranks;
        let mut list: Vec<_> = self.buf.iter().map(|&w| (ranks.key(v, w), w)).collect();
        list.sort_unstable();
        self.adjacency.insert(v, (cap, list));
        Ok(())
    }

    fn capacity_of(&self, v: Vertex) -> u32 {
        self.adjacency[&v].0
    }

    fn entry(&self, v: Vertex, i: usize) -> Option<(EdgeKey, Vertex)> {
        self.adjacency[&v].1.get(i).copied()
    }

    fn frame(&mut self, u: Vertex, v: Vertex) -> Result<Frame, Error> {
        self.ensure(u)?;
        self.ensure(v)?;
        Ok(Frame {
            u,
            v,
            key: self.ranks.key(u, v),
            next_u: 0,
            next_v: 0,
            load_u: 0,
            load_v: 0,
        })
    }

    /// Multiplicity of the view edge `(u, v)` in the greedy b-matching.
    pub fn multiplicity(&mut self, u: Vertex, v: Vertex) -> Result<u32, Error> {
        let edge = (u.min(v), u.max(v));
        if let Some(&x) = self.memo.get(&edge) {
            return Ok(x);
        }
        let mut stack = vec![self.frame(u, v)?];
        loop {
            let top = stack.last().expect("stack is non-empty");
            let (cap_u, cap_v) = (self.capacity_of(top.u), self.capacity_of(top.v));
            let lower = |e: Option<(EdgeKey, Vertex)>| e.filter(|(k, _)| *k < top.key);
            let from_u = lower(self.entry(top.u, top.next_u));
            let from_v = lower(self.entry(top.v, top.next_v));
            let next = match (from_u, from_v) {
                (Some(a), Some(b)) if b.0 < a.0 => Some((false, b.1)),
                (Some(a), _) => Some((true, a.1)),
                (None, Some(b)) => Some((false, b.1)),
                (None, None) => None,
            };
            let Some((at_u, w)) = next else {
                let x = (cap_u - top.load_u).min(cap_v - top.load_v);
                let done = stack.pop().expect("stack is non-empty");
                self.memo.insert((done.u.min(done.v), done.u.max(done.v)), x);
                if stack.is_empty() {
                    return Ok(x);
                }
                continue;
            };
            let p = if at_u { top.u } else { top.v };
            let stats = self.view.stats();
            stats.record_visit(p);
            stats.record_visit(w);
            match self.memo.get(&(p.min(w), p.max(w))) {
                Some(&x) => {
                    let top = stack.last_mut().expect("stack is non-empty");
                    let saturated = if at_u {
                        top.next_u += 1;
                        top.load_u += x;
                        top.load_u >= cap_u
                    } else {
                        top.next_v += 1;
                        top.load_v += x;
                        top.load_v >= cap_v
                    };
                    if saturated {
                        let done = stack.pop().expect("stack is non-empty");
                        self.memo.insert((done.u.min(done.v), done.u.max(done.v)), 0);
                        if stack.is_empty() {
                            return Ok(0);
                        }
                    }
                }
                None => {
                    let f = self.frame(p, w)?;
                    stack.push(f);
                }
            }
        }
    }

    /// Matched partners of `v` with their multiplicities, in rank order.
    pub fn incident(&mut self, v: Vertex) -> Result<Vec<(Vertex, u32)>, Error> {
        self.ensure(v)?;
        let cap = self.capacity_of(v);
        let mut load = 0;
        let mut out = Vec::new();
        let mut i = 0;
        while load < cap {
            let Some((_, w)) = self.entry(v, i) else { break };
            let x = self.multiplicity(v, w)?;
            if x > 0 {
                out.push((w, x));
                load += x;
            }
            i += 1;
        }
        Ok(out)
    }

    /// Total multiplicity at `v`.
    pub fn load(&mut self, v: Vertex) -> Result<u32, Error> {
        Ok(self.incident(v)?.iter().map(|&(_, x)| x).sum())
    }

    /// Vertices sharing a matched edge with `v`.
    pub fn partners(&mut self, v: Vertex) -> Result<Vec<Vertex>, Error> {
        Ok(self.incident(v)?.into_iter().map(|(w, _)| w).collect())
    }

    pub fn vertex_matched(&mut self, v: Vertex) -> Result<OracleAnswer, Error> {
        let before = self.probes();
        let partner = self.incident(v)?.first().map(|&(w, _)| w);
        Ok(OracleAnswer {
            matched: partner.is_some(),
            partner,
            probes_used: self.probes() - before,
        })
    }

    /// The matched edge at `v` as `(min, max)`, for unit capacities.
    pub fn matched_edge(&mut self, v: Vertex) -> Result<Option<(Vertex, Vertex)>, Error> {
        Ok(self.vertex_matched(v)?.partner.map(|w| (v.min(w), v.max(w))))
    }
}

/// Per-vertex visit counts of `samples` queries from uniformly random start
/// vertices, each with a fresh rank function (and a fresh memo).
pub fn visit_profile<V: CapView>(view: V, samples: usize, seed: u64) -> Result<Vec<u64>, Error> {
    let n = view.universe();
    let before = view.stats().visit_counts();
    let mut rng = seed::rng(seed);
    for i in 0..samples {
        let start = rng.gen_range(0..n);
        let mut engine = LocalGreedy::new(&view, RankFunction::new(seed::derive(seed, i as u64)));
        engine.vertex_matched(start)?;
    }
    let after = view.stats().visit_counts();
    Ok(after.iter().zip(&before).map(|(a, b)| a - b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::ListOracle;
    use crate::exact::{gmm, gmm_by_key, maximal_bmatching_cross, Side};
    use crate::graph::Graph;
    use crate::stats::OracleStats;
    use crate::testutil::*;
    use crate::view::{Domain, InducedView};
    use crate::Matching;

    fn engine<'a>(g: &'a Graph, stats: &'a OracleStats, seed: u64) -> LocalGreedy<InducedView<ListOracle<'a>, Domain>> {
        let view = InducedView::new(ListOracle::new(g, stats), Domain(g.vertex_count()));
        LocalGreedy::new(view, RankFunction::new(seed))
    }

    #[test]
    fn single_edge_and_isolated_vertex() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let stats = OracleStats::new(3);
        let mut e = engine(&g, &stats, 1);
        let a = e.vertex_matched(0).unwrap();
        assert!(a.matched);
        assert_eq!(a.partner, Some(1));
        assert_eq!(e.matched_edge(1).unwrap(), Some((0, 1)));
        assert_eq!(e.matched_edge(2).unwrap(), None);
    }

    #[test]
    fn path_end_unmatched_when_first_edge_wins() {
        let g = path(3);
        for seed in 0..50 {
            let r = RankFunction::new(seed);
            if r.key(0, 1) < r.key(1, 2) {
                let stats = OracleStats::new(3);
                let mut e = engine(&g, &stats, seed);
                assert!(!e.vertex_matched(2).unwrap().matched);
                return;
            }
        }
        panic!("no seed ranks (0,1) first");
    }

    #[test]
    fn agrees_with_global_greedy() {
        for gi in 0..300u64 {
            let n = 2 + (gi % 39) as usize;
            let g = match gi % 3 {
                0 => erdos_renyi(n, 0.2, gi),
                1 => random_bipartite(n, 0.3, gi),
                _ => erdos_renyi(n, 0.5, gi),
            };
            for s in 0..20 {
                let seed = gi * 1000 + s;
                let m = gmm(&g, &RankFunction::new(seed)).unwrap();
                let stats = OracleStats::new(n);
                let mut e = engine(&g, &stats, seed);
                for v in 0..n {
                    let a = e.vertex_matched(v).unwrap();
                    assert_eq!(a.partner, m.partner(v), "graph {gi} seed {seed} vertex {v}");
                }
            }
        }
    }

    #[test]
    fn answers_do_not_depend_on_query_order() {
        let g = erdos_renyi(40, 0.15, 3);
        let stats = OracleStats::new(40);
        let mut forward = engine(&g, &stats, 8);
        let a: Vec<_> = (0..40).map(|v| forward.matched_edge(v).unwrap()).collect();
        let mut backward = engine(&g, &stats, 8);
        let mut b: Vec<_> = (0..40).rev().map(|v| backward.matched_edge(v).unwrap()).collect();
        b.reverse();
        assert_eq!(a, b);
        let pairs = a.iter().flatten().copied().collect::<Vec<_>>();
        let mut m = Matching::new();
        for (u, v) in pairs {
            if !m.is_matched(u) {
                m.insert(u, v).unwrap();
            }
        }
        for v in 0..40 {
            assert_eq!(a[v], m.partner(v).map(|w| (v.min(w), v.max(w))));
        }
    }

    /// Explicit duplicated graph: copy `j` of `v` is `v * slots + j`.
    fn duplicate(g: &Graph, side: &[Option<Side>], cap_a: usize, cap_b: usize, slots: usize) -> Graph {
        let cap = |v: usize| match side[v] {
            Some(Side::A) => cap_a,
            Some(Side::B) => cap_b,
            None => 0,
        };
        let mut edges = Vec::new();
        for (u, v) in g.edges() {
            if side[u].is_some() && side[v].is_some() && side[u] != side[v] {
                for i in 0..cap(u) {
                    for j in 0..cap(v) {
                        edges.push((u * slots + i, v * slots + j));
                    }
                }
            }
        }
        Graph::from_edges(g.vertex_count() * slots, &edges).unwrap()
    }

    struct SideView<'a> {
        g: &'a Graph,
        side: &'a [Option<Side>],
        caps: (u32, u32),
        stats: &'a OracleStats,
    }

    impl CapView for SideView<'_> {
        fn universe(&self) -> usize {
            self.g.vertex_count()
        }
        fn capacity(&self, v: Vertex) -> Result<u32, Error> {
            Ok(match self.side[v] {
                Some(Side::A) => self.caps.0,
                Some(Side::B) => self.caps.1,
                None => 0,
            })
        }
        fn neighbors(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
            if let Some(s) = self.side[v] {
                out.extend(self.g.neighbors(v).iter().filter(|&&w| self.side[w] == Some(s.opposite())));
            }
            Ok(())
        }
        fn stats(&self) -> &OracleStats {
            self.stats
        }
    }

    #[test]
    fn capacitated_engine_matches_duplicated_greedy() {
        for gi in 0..60u64 {
            let n = 4 + (gi % 14) as usize;
            let g = erdos_renyi(n, 0.35, gi);
            let side: Vec<_> = (0..n)
                .map(|v| match (v + gi as usize) % 5 {
                    0 => None,
                    1 | 2 => Some(Side::A),
                    _ => Some(Side::B),
                })
                .collect();
            let (cap_a, cap_b) = (2u32, 5u32);
            let slots = 5;
            let r = RankFunction::new(gi);
            let big = duplicate(&g, &side, cap_a as usize, cap_b as usize, slots);
            let virt = gmm_by_key(&big, |x, y| {
                let (bx, by) = (x / slots, y / slots);
                let (ix, iy) = if bx < by { (x % slots, y % slots) } else { (y % slots, x % slots) };
                (r.key(bx, by), ix, iy)
            });
            let reference = maximal_bmatching_cross(&g, &side, cap_a, cap_b, &r);
            let stats = OracleStats::new(n);
            let mut e = LocalGreedy::new(SideView { g: &g, side: &side, caps: (cap_a, cap_b), stats: &stats }, r);
            for v in 0..n {
                let load = e.load(v).unwrap();
                assert_eq!(load, reference.load(v), "graph {gi} vertex {v}");
                for j in 0..slots {
                    assert_eq!(virt.is_matched(v * slots + j), (j as u32) < load, "graph {gi} copy ({v},{j})");
                }
            }
        }
    }

    #[test]
    fn single_edge_visits_are_symmetric() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let stats = OracleStats::new(2);
        let view = InducedView::new(ListOracle::new(&g, &stats), Domain(2));
        let visits = visit_profile(&view, 2000, 4).unwrap();
        assert_eq!(visits[0], visits[1]);
    }

    fn ln(x: f64) -> f64 {
        libm::log(x)
    }

    #[test]
    fn regular_graph_visits_are_balanced() {
        let n = 2000;
        let g = circulant(n, &[1, 7, 50, 301]);
        let stats = OracleStats::new(n);
        let view = InducedView::new(ListOracle::new(&g, &stats), Domain(n));
        let visits = visit_profile(&view, 20_000, 12).unwrap();
        let max = *visits.iter().max().unwrap() as f64;
        let min = (*visits.iter().min().unwrap()).max(1) as f64;
        assert!(max / min <= 10.0 * ln(n as f64).powi(2), "{max} / {min}");
    }

    #[test]
    fn star_center_share_of_visits() {
        let n = 400;
        let g = star(n);
        let stats = OracleStats::new(n);
        let view = InducedView::new(ListOracle::new(&g, &stats), Domain(n));
        let visits = visit_profile(&view, 4000, 2).unwrap();
        let total: u64 = visits.iter().sum();
        let share = visits[0] as f64 / total as f64;
        let expected = g.degree(0) as f64 / (2 * g.edge_count()) as f64;
        let slack = 3.0 * ln(n as f64).powi(2);
        assert!(share <= expected * slack && share >= expected / slack, "{share} vs {expected}");
    }
}
