//! Small seeded graph generators for unit tests.

use alloc::vec::Vec;
use rand::Rng;

use crate::graph::Graph;
use crate::seed::rng;

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges).unwrap()
}

pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn disjoint_matching(n: usize) -> Graph {
    let edges: Vec<_> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if r.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Sides are `0..n/2` and `n/2..n`.
pub fn random_bipartite(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let half = n / 2;
    let mut edges = Vec::new();
    for u in 0..half {
        for v in half..n {
            if r.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Regular graph of even degree `2 * shifts` as a union of circulant offsets.
pub fn circulant(n: usize, shifts: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for v in 0..n {
        for &s in shifts {
            edges.push((v, (v + s) % n));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}
