use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::graph::Vertex;

/// Probe and visit counters shared by every oracle of one run.
///
/// Counters are atomics so concurrent workers may accumulate into the same
/// instance; totals are exact once all workers are done. Per-vertex counters
/// are indexed by base vertex id.
#[derive(Debug)]
pub struct OracleStats {
    list_probes: AtomicU64,
    matrix_probes: AtomicU64,
    per_vertex_list_probes: Vec<AtomicU64>,
    per_vertex_visits: Vec<AtomicU64>,
}

/// Plain copy of [`OracleStats`] at one instant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StatsSnapshot {
    pub list_probes: u64,
    pub matrix_probes: u64,
    pub per_vertex: Vec<VertexCounters>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexCounters {
    pub list_probes: u64,
    pub visits: u64,
}

impl OracleStats {
    pub fn new(n: usize) -> Self {
        OracleStats {
            list_probes: AtomicU64::new(0),
            matrix_probes: AtomicU64::new(0),
            per_vertex_list_probes: (0..n).map(|_| AtomicU64::new(0)).collect(),
            per_vertex_visits: (0..n).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.per_vertex_visits.len()
    }

    #[inline]
    pub fn record_list_probe(&self, v: Vertex) {
        self.list_probes.fetch_add(1, Ordering::Relaxed);
        self.per_vertex_list_probes[v].fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    pub fn record_matrix_probe(&self) {
        self.matrix_probes.fetch_add(1, Ordering::Relaxed);
    }

    /// Counts one query of an edge incident to `v` by a local oracle.
    /// Ids outside the counter range (virtual vertices) are ignored.
    #[inline]
    pub fn record_visit(&self, v: Vertex) {
        if let Some(c) = self.per_vertex_visits.get(v) {
            c.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn list_probes(&self) -> u64 {
        self.list_probes.load(Ordering::Relaxed)
    }

    pub fn matrix_probes(&self) -> u64 {
        self.matrix_probes.load(Ordering::Relaxed)
    }

    pub fn vertex_list_probes(&self, v: Vertex) -> u64 {
        self.per_vertex_list_probes[v].load(Ordering::Relaxed)
    }

    pub fn visits(&self, v: Vertex) -> u64 {
        self.per_vertex_visits[v].load(Ordering::Relaxed)
    }

    pub fn visit_counts(&self) -> Vec<u64> {
        self.per_vertex_visits
            .iter()
            .map(|c| c.load(Ordering::Relaxed))
            .collect()
    }

    pub fn reset(&self) {
        self.list_probes.store(0, Ordering::Relaxed);
        self.matrix_probes.store(0, Ordering::Relaxed);
        for c in self.per_vertex_list_probes.iter().chain(&self.per_vertex_visits) {
            c.store(0, Ordering::Relaxed);
        }
    }

    pub fn snapshot(&self) -> StatsSnapshot {
        StatsSnapshot {
            list_probes: self.list_probes(),
            matrix_probes: self.matrix_probes(),
            per_vertex: self
                .per_vertex_list_probes
                .iter()
                .zip(&self.per_vertex_visits)
                .map(|(p, v)| VertexCounters {
                    list_probes: p.load(Ordering::Relaxed),
                    visits: v.load(Ordering::Relaxed),
                })
                .collect(),
        }
    }
}
