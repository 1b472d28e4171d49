//! Ground-truth algorithms: exact maximum matching, greedy matchings under an
//! explicit order, maximal b-matchings, the two-pass streaming reference and
//! the fractional-matching bound checker.

mod blossom;
mod bounds;
mod greedy;
mod hopcroft_karp;
mod streaming;

pub use blossom::blossom_max_matching;
pub use bounds::{check_fractional_bound, ApproxConstants, FractionalReport, B};
pub use greedy::{gmm, gmm_by_key, maximal_bmatching, maximal_bmatching_cross, Side};
pub use hopcroft_karp::hopcroft_karp;
pub use streaming::{k_for_eps, kb_capacity, two_pass_streaming, TwoPassConfig, TwoPassResult};

use crate::graph::Graph;
use crate::matching::Matching;

/// A maximum matching of `g`: Hopcroft–Karp when `g` is bipartite, Edmonds'
/// blossom algorithm otherwise.
pub fn exact_max_matching(g: &Graph) -> Matching {
    match g.two_coloring() {
        Ok(color) => hopcroft_karp(g, &color),
        Err(_) => blossom_max_matching(g),
    }
}

/// `mu(g)`.
pub fn max_matching_size(g: &Graph) -> usize {
    exact_max_matching(g).len()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn petersen() -> Graph {
        let mut e = alloc::vec::Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn small_known_values() {
        assert_eq!(max_matching_size(&path(4)), 2);
        let k33 = Graph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert_eq!(max_matching_size(&k33), 3);
        let p = petersen();
        assert_eq!(brute::max_matching_size(&p), 5);
        assert_eq!(max_matching_size(&p), 5);
        assert_eq!(max_matching_size(&cycle(9)), 4);
        assert_eq!(max_matching_size(&Graph::empty(4)), 0);
    }

    #[test]
    fn blossom_agrees_with_exhaustive_search() {
        for seed in 0..1000u64 {
            let n = 2 + (seed % 9) as usize;
            let p = 0.15 + 0.6 * ((seed / 9) % 5) as f64 / 5.0;
            let g = erdos_renyi(n, p, seed);
            let m = blossom_max_matching(&g);
            assert!(m.is_subgraph_of(&g));
            assert_eq!(m.len(), brute::max_matching_size(&g), "seed {seed}");
        }
    }

    #[test]
    fn both_exact_methods_agree_on_bipartite_inputs() {
        for seed in 0..200u64 {
            let g = random_bipartite(10 + (seed % 50) as usize, 0.1, seed);
            let color = g.two_coloring().unwrap();
            let hk = hopcroft_karp(&g, &color);
            let bl = blossom_max_matching(&g);
            assert!(hk.is_subgraph_of(&g));
            assert_eq!(hk.len(), bl.len(), "seed {seed}");
        }
    }
}
