use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::matching::Matching;

const NONE: usize = usize::MAX;

/// Maximum matching of a bipartite graph given a proper two-colouring
/// (`false` marks the left side).
pub fn hopcroft_karp(g: &Graph, color: &[bool]) -> Matching {
    let n = g.vertex_count();
    let left: Vec<usize> = (0..n).filter(|&v| !color[v]).collect();
    let mut mate = vec![NONE; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    loop {
        // layered BFS from free left vertices
        queue.clear();
        for &u in &left {
            if mate[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                match mate[v] {
                    NONE => found = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; n];
        for &u in &left {
            if mate[u] == NONE {
                augment(g, u, &mut mate, &mut dist, &mut next);
            }
        }
    }
    let mut m = Matching::new();
    for &u in &left {
        if mate[u] != NONE {
            m.insert(u, mate[u]).expect("augmenting paths keep a matching");
        }
    }
    m
}

/// Iterative DFS along the BFS layers.
fn augment(g: &Graph, root: usize, mate: &mut [usize], dist: &mut [usize], next: &mut [usize]) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        let nbrs = g.neighbors(u);
        if next[u] == nbrs.len() {
            dist[u] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = nbrs[next[u]];
        next[u] += 1;
        match mate[v] {
            NONE => {
                // flip the path root -> ... -> u -> v
                let mut right = v;
                while let Some(l) = stack.pop() {
                    let prev = mate[l];
                    mate[l] = right;
                    mate[right] = l;
                    right = prev;
                }
                return true;
            }
            w if dist[w] == dist[u] + 1 => stack.push(w),
            _ => {}
        }
    }
    false
}
