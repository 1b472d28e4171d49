use crate::graph::Vertex;
use crate::seed::{derive, mix64};

/// Total order key of an edge: the hashed rank, then the endpoints.
///
/// The endpoint tail only matters when two hashes collide, which keeps local
/// oracles well defined even then; [`crate::exact::gmm`] rejects collisions
/// outright.
pub type EdgeKey = (u64, Vertex, Vertex);

/// Lazily evaluated random edge ranks.
///
/// `rank(u, v)` is a hash of the seed and the unordered endpoint pair, so the
/// ranks of any finite edge set induce a uniformly random order (up to hash
/// quality) without storing a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankFunction {
    seed: u64,
}

impl RankFunction {
    pub fn new(seed: u64) -> Self {
        RankFunction { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A fresh rank function, used after a collision was detected.
    pub fn reseeded(&self) -> Self {
        RankFunction::new(derive(self.seed, 0x5EED))
    }

    #[inline]
    pub fn hash(&self, u: Vertex, v: Vertex) -> u64 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let inner = mix64((a as u64).wrapping_mul(0xA24B_AED4_963E_E407) ^ mix64(b as u64));
        mix64(self.seed ^ inner)
    }

    /// Rank as a real in `(0, 1)`.
    pub fn rank(&self, u: Vertex, v: Vertex) -> f64 {
        ((self.hash(u, v) >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    #[inline]
    pub fn key(&self, u: Vertex, v: Vertex) -> EdgeKey {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        (self.hash(a, b), a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_seed_determined() {
        let r = RankFunction::new(42);
        assert_eq!(r.rank(3, 9), r.rank(9, 3));
        assert_eq!(r.key(3, 9), r.key(9, 3));
        assert_eq!(RankFunction::new(42).hash(1, 2), r.hash(1, 2));
        assert_ne!(RankFunction::new(43).hash(1, 2), r.hash(1, 2));
        assert_ne!(r.reseeded(), r);
    }

    #[test]
    fn ranks_lie_in_open_unit_interval_and_look_uniform() {
        let r = RankFunction::new(7);
        let mut below_half = 0;
        let total = 20_000;
        for i in 0..200 {
            for j in (i + 1)..(i + 101) {
                let x = r.rank(i, j);
                assert!(x > 0.0 && x < 1.0);
                if x < 0.5 {
                    below_half += 1;
                }
            }
        }
        let frac = below_half as f64 / total as f64;
        assert!((frac - 0.5).abs() < 0.02, "{frac}");
    }

    #[test]
    fn no_collisions_on_a_dense_edge_set() {
        let r = RankFunction::new(11);
        let mut hashes: std::vec::Vec<u64> = (0..300)
            .flat_map(|i| ((i + 1)..300).map(move |j| (i, j)))
            .map(|(i, j)| r.hash(i, j))
            .collect();
        let len = hashes.len();
        hashes.sort_unstable();
        hashes.dedup();
        assert_eq!(hashes.len(), len);
    }
}
