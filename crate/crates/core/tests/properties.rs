use mmest_core::access::{degree_via_binary_search, ListAccess, ListOracle, MatrixOracle};
use mmest_core::bipartite::BipartiteView;
use mmest_core::estimator::{estimate_bipartite, EstimatorConfig, Mode};
use mmest_core::exact::{gmm, max_matching_size, maximal_bmatching_cross, two_pass_streaming, Side, TwoPassConfig};
use mmest_core::local::LocalGreedy;
use mmest_core::sparsify::{sparsify, SparsifierConfig};
use mmest_core::view::{Domain, InducedView};
use mmest_core::{Graph, OracleStats, RankFunction};
use proptest::prelude::*;

/// Simple graphs on up to `max_n` vertices.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let mut edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).map(|(u, v)| (u.min(v), u.max(v))).collect();
            edges.sort_unstable();
            edges.dedup();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// Bipartite graphs with sides `[0, n/2)` and `[n/2, n)`.
fn bipartite_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_map(|g| {
        let half = g.vertex_count() / 2;
        g.filter_edges(|u, v| (u < half) != (v < half))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adjacency_is_symmetric(g in graph(30)) {
        let stats = OracleStats::new(g.vertex_count());
        let matrix = MatrixOracle::new(&g, &stats);
        for u in 0..g.vertex_count() {
            for &v in g.neighbors(u) {
                prop_assert!(g.neighbors(v).contains(&u));
            }
            for v in 0..g.vertex_count() {
                prop_assert_eq!(matrix.matrix_probe(u, v).unwrap(), matrix.matrix_probe(v, u).unwrap());
            }
        }
    }

    #[test]
    fn binary_search_recovers_degrees(g in graph(40)) {
        let stats = OracleStats::new(g.vertex_count());
        let list = ListOracle::new(&g, &stats);
        for v in 0..g.vertex_count() {
            prop_assert_eq!(degree_via_binary_search(&list, v).unwrap(), g.degree(v));
        }
    }

    #[test]
    fn probe_totals_equal_per_vertex_sums(g in graph(30), seed in any::<u64>()) {
        let stats = OracleStats::new(g.vertex_count());
        let list = ListOracle::new(&g, &stats);
        sparsify(&list, &SparsifierConfig::for_vertex_count(g.vertex_count()), seed).unwrap();
        let snapshot = stats.snapshot();
        prop_assert_eq!(snapshot.list_probes, snapshot.per_vertex.iter().map(|c| c.list_probes).sum::<u64>());
    }

    #[test]
    fn greedy_matching_is_maximal(g in graph(30), seed in any::<u64>()) {
        let m = gmm(&g, &RankFunction::new(seed)).unwrap();
        prop_assert!(m.is_subgraph_of(&g));
        prop_assert!(m.is_maximal_in(&g));
        prop_assert!(2 * m.len() >= max_matching_size(&g));
    }

    #[test]
    fn local_oracle_agrees_with_greedy(g in graph(25), seed in any::<u64>()) {
        let n = g.vertex_count();
        let m = gmm(&g, &RankFunction::new(seed)).unwrap();
        let stats = OracleStats::new(n);
        let mut engine = LocalGreedy::new(InducedView::new(ListOracle::new(&g, &stats), Domain(n)), RankFunction::new(seed));
        for v in (0..n).rev() {
            prop_assert_eq!(engine.vertex_matched(v).unwrap().partner, m.partner(v));
        }
    }

    #[test]
    fn capacitated_oracle_matches_global_bmatching(g in bipartite_graph(24), seed in any::<u64>(), cap_a in 1u32..4, cap_b in 1u32..4) {
        let n = g.vertex_count();
        let half = n / 2;
        let side: Vec<_> = (0..n).map(|v| Some(if v < half { Side::A } else { Side::B })).collect();
        let global = maximal_bmatching_cross(&g, &side, cap_a, cap_b, &RankFunction::new(seed));
        let stats = OracleStats::new(n);
        let view = BipartiteView::new(ListOracle::new(&g, &stats), side.as_slice(), cap_a, cap_b);
        let mut engine = LocalGreedy::new(view, RankFunction::new(seed));
        for v in 0..n {
            let load = engine.load(v).unwrap();
            prop_assert_eq!(load, global.load(v));
            let cap = if v < half { cap_a } else { cap_b };
            prop_assert!(load <= cap);
        }
        for (u, v) in g.edges() {
            prop_assert!(global.residual(u) == 0 || global.residual(v) == 0, "edge ({}, {}) left unsaturated", u, v);
        }
    }

    #[test]
    fn sparsifier_returns_a_matching_of_g(g in graph(40), seed in any::<u64>(), c in 1usize..20) {
        let stats = OracleStats::new(g.vertex_count());
        let list = ListOracle::new(&g, &stats);
        let m = sparsify(&list, &SparsifierConfig { c, order: None }, seed).unwrap();
        prop_assert!(m.is_subgraph_of(&g));
        // each free vertex spends at most c samples plus a degree search
        let search = (g.vertex_count() as f64).log2().ceil() as u64 + 1;
        prop_assert!(stats.list_probes() <= g.vertex_count() as u64 * (c as u64 + search));
    }

    #[test]
    fn two_pass_within_guarantee(g in bipartite_graph(40)) {
        let mu = max_matching_size(&g) as f64;
        let stream: Vec<_> = g.edges().collect();
        let eps = 0.1;
        let value = two_pass_streaming(g.vertex_count(), &stream, TwoPassConfig::from_eps(eps)).unwrap().value;
        prop_assert!(value >= (2.0 - std::f64::consts::SQRT_2 - eps) * mu - 1e-9);
        prop_assert!(value <= mu + 1e-9);
    }

    #[test]
    fn exact_case_values_bound_mu(g in bipartite_graph(30), seed in any::<u64>()) {
        let mu = max_matching_size(&g) as f64;
        let stats = OracleStats::new(g.vertex_count());
        let cfg = EstimatorConfig::new(Mode::Bipartite, 0.2).with_k(20).with_exact_reference(true);
        let r = estimate_bipartite(&ListOracle::new(&g, &stats), &cfg, seed).unwrap();
        prop_assert!(r.mu1 <= mu + 1e-9 && r.mu2 <= mu + 1e-9);
        prop_assert!(r.estimate >= 0.0 && r.estimate <= g.vertex_count() as f64 / 2.0);
    }

    #[test]
    fn estimates_are_seed_deterministic(g in graph(30), seed in any::<u64>()) {
        let run = || {
            let stats = OracleStats::new(g.vertex_count());
            let list = ListOracle::new(&g, &stats);
            let cfg = EstimatorConfig::new(Mode::Bipartite, 0.5);
            let r = estimate_bipartite(&list, &cfg, seed).unwrap();
            (r.estimate, r.m_size, list.stats().list_probes())
        };
        prop_assert_eq!(run(), run());
    }
}
