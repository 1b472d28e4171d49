use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{Graph, Vertex};
use crate::matching::{BMatching, Matching};
use crate::rank::RankFunction;

/// Side of a vertex in a bipartite view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Greedy maximal matching: scan edges by increasing rank, keep an edge when
/// both endpoints are free. Rejects rank collisions.
pub fn gmm(g: &Graph, ranks: &RankFunction) -> Result<Matching, Error> {
    let mut edges: Vec<_> = g.edges().map(|(u, v)| (ranks.key(u, v), u, v)).collect();
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| w[0].0 .0 == w[1].0 .0) {
        return Err(Error::DuplicateRank(w[0].1, w[0].2, w[1].1, w[1].2));
    }
    Ok(greedy_in_order(edges.into_iter().map(|(_, u, v)| (u, v))))
}

/// Greedy maximal matching under an arbitrary total order of edge keys.
pub fn gmm_by_key<K: Ord>(g: &Graph, mut key: impl FnMut(Vertex, Vertex) -> K) -> Matching {
    let mut edges: Vec<_> = g.edges().map(|(u, v)| (key(u, v), u, v)).collect();
    edges.sort_by(|a, b| a.0.cmp(&b.0));
    greedy_in_order(edges.into_iter().map(|(_, u, v)| (u, v)))
}

fn greedy_in_order(edges: impl Iterator<Item = (Vertex, Vertex)>) -> Matching {
    let mut m = Matching::new();
    for (u, v) in edges {
        if !m.is_matched(u) && !m.is_matched(v) {
            m.insert(u, v).expect("both endpoints are free");
        }
    }
    m
}

/// Maximal b-matching of the bipartite graph `g`: side `A` vertices get
/// capacity `cap_a`, side `B` ones `cap_b`, vertices with side `None` are
/// left out. An edge with both endpoints on one side is an error.
pub fn maximal_bmatching(
    g: &Graph,
    side: &[Option<Side>],
    cap_a: u32,
    cap_b: u32,
    ranks: &RankFunction,
) -> Result<BMatching, Error> {
    for (u, v) in g.edges() {
        if let (Some(x), Some(y)) = (side[u], side[v]) {
            if x == y {
                return Err(Error::NotBipartite(u, v));
            }
        }
    }
    Ok(maximal_bmatching_cross(g, side, cap_a, cap_b, ranks))
}

/// Maximal b-matching of `G[A, B]`: only edges between an `A` and a `B`
/// vertex are considered. Edges are scanned by increasing rank and each gets
/// multiplicity `min(residual(a), residual(b))`.
pub fn maximal_bmatching_cross(
    g: &Graph,
    side: &[Option<Side>],
    cap_a: u32,
    cap_b: u32,
    ranks: &RankFunction,
) -> BMatching {
    let capacity = side
        .iter()
        .map(|s| match s {
            Some(Side::A) => cap_a,
            Some(Side::B) => cap_b,
            None => 0,
        })
        .collect();
    let mut b = BMatching::new(capacity);
    let mut edges: Vec<_> = g
        .edges()
        .filter_map(|(u, v)| match (side[u], side[v]) {
            (Some(Side::A), Some(Side::B)) => Some((ranks.key(u, v), u, v)),
            (Some(Side::B), Some(Side::A)) => Some((ranks.key(u, v), v, u)),
            _ => None,
        })
        .collect();
    edges.sort_unstable();
    for (_, a, v) in edges {
        let mult = b.residual(a).min(b.residual(v));
        b.add(a, v, mult).expect("multiplicity within residuals");
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use alloc::vec;

    /// Ranks with a prescribed order for specific edges: `order` lists the
    /// edges from lowest to highest.
    fn key_from(order: &[(Vertex, Vertex)]) -> impl FnMut(Vertex, Vertex) -> usize + '_ {
        move |u, v| {
            order
                .iter()
                .position(|&(a, b)| (a, b) == (u.min(v), u.max(v)))
                .unwrap()
        }
    }

    #[test]
    fn path_follows_rank_order() {
        let g = path(3);
        assert_eq!(gmm_by_key(&g, key_from(&[(0, 1), (1, 2)])).edges(), &[(0, 1)]);
        assert_eq!(gmm_by_key(&g, key_from(&[(1, 2), (0, 1)])).edges(), &[(1, 2)]);
    }

    #[test]
    fn gmm_is_maximal_and_pure() {
        for seed in 0..100 {
            let g = erdos_renyi(30, 0.15, seed);
            let r = RankFunction::new(seed);
            let m = gmm(&g, &r).unwrap();
            assert!(m.is_subgraph_of(&g));
            assert!(m.is_maximal_in(&g));
            assert_eq!(m, gmm(&g, &r).unwrap());
        }
    }

    #[test]
    fn bmatching_single_edge_takes_min_residual() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let side = vec![Some(Side::A), Some(Side::B)];
        let b = maximal_bmatching(&g, &side, 2, 5, &RankFunction::new(1)).unwrap();
        assert_eq!(b.size(), 2);
        assert_eq!(b.edges(), &[(0, 1, 2)]);
    }

    #[test]
    fn bmatching_star_saturates_center() {
        let g = star(4);
        let side = vec![Some(Side::A), Some(Side::B), Some(Side::B), Some(Side::B)];
        let b = maximal_bmatching(&g, &side, 2, 2, &RankFunction::new(3)).unwrap();
        assert_eq!(b.size(), 2);
        assert_eq!(b.load(0), 2);
    }

    #[test]
    fn bmatching_empty_and_non_bipartite() {
        let g = Graph::empty(3);
        let side = vec![Some(Side::A); 3];
        assert_eq!(maximal_bmatching(&g, &side, 1, 1, &RankFunction::new(0)).unwrap().size(), 0);
        let g = path(3);
        let side = vec![Some(Side::A), Some(Side::A), Some(Side::B)];
        assert_eq!(
            maximal_bmatching(&g, &side, 1, 1, &RankFunction::new(0)),
            Err(Error::NotBipartite(0, 1))
        );
    }

    #[test]
    fn bmatching_is_maximal_within_capacities() {
        for seed in 0..100 {
            let g = random_bipartite(40, 0.2, seed);
            let side: Vec<_> = (0..40).map(|v| Some(if v < 20 { Side::A } else { Side::B })).collect();
            let b = maximal_bmatching(&g, &side, 3, 7, &RankFunction::new(seed)).unwrap();
            assert!(b.is_consistent());
            for (u, v) in g.edges() {
                assert!(b.residual(u) == 0 || b.residual(v) == 0, "edge ({u},{v}) not blocked");
            }
        }
    }
}
