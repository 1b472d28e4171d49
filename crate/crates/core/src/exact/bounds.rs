use alloc::format;

use crate::error::Error;
use crate::exact::max_matching_size;
use crate::graph::Graph;
use crate::matching::{BMatching, Matching};

/// `b = 1 + sqrt(2)`.
pub const B: f64 = 1.0 + core::f64::consts::SQRT_2;

/// Constants of the max-of-two-cases approximation argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxConstants {
    pub b: f64,
    /// Weight of the first case, `(12 + 2 sqrt 2) / 17`.
    pub beta: f64,
    /// Resulting ratio, `4 (5 - 2 sqrt 2) / 17`.
    pub gamma: f64,
}

impl ApproxConstants {
    pub fn new() -> Self {
        let s2 = core::f64::consts::SQRT_2;
        ApproxConstants {
            b: B,
            beta: (12.0 + 2.0 * s2) / 17.0,
            gamma: 4.0 * (5.0 - 2.0 * s2) / 17.0,
        }
    }

    /// `beta/2 + (2 - sqrt 2)(1 - beta) - (2 - sqrt 2) beta`; zero by construction.
    pub fn balance_residual(&self) -> f64 {
        let c = 2.0 - core::f64::consts::SQRT_2;
        self.beta / 2.0 + c * (1.0 - self.beta) - c * self.beta
    }
}

impl Default for ApproxConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Values and slacks of the two fractional lower bounds on `mu(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalReport {
    pub mu: usize,
    /// `|M| + (1 - 1/b)|M'| + |B1| / (k b)`.
    pub case1: f64,
    /// `(1 - 1/b)|M| + |B2| / (k b)`.
    pub case2: f64,
    pub slack1: f64,
    pub slack2: f64,
}

/// Checks `case1 <= mu(G)` and `case2 <= mu(G)` (bipartite `g`), returning a
/// [`Error::BoundViolation`] carrying the full state when either fails.
pub fn check_fractional_bound(
    g: &Graph,
    m: &Matching,
    m_prime: &Matching,
    b1: &BMatching,
    b2: &BMatching,
    k: u32,
) -> Result<FractionalReport, Error> {
    let kb = k as f64 * B;
    let mu = max_matching_size(g);
    let case1 = m.len() as f64 + (1.0 - 1.0 / B) * m_prime.len() as f64 + b1.size() as f64 / kb;
    let case2 = (1.0 - 1.0 / B) * m.len() as f64 + b2.size() as f64 / kb;
    let report = FractionalReport {
        mu,
        case1,
        case2,
        slack1: mu as f64 - case1,
        slack2: mu as f64 - case2,
    };
    const TOL: f64 = 1e-9;
    if report.slack1 < -TOL || report.slack2 < -TOL {
        return Err(Error::BoundViolation(format!(
            "{report:?}; M={:?}; M'={:?}; B1={:?}; B2={:?}; edges={:?}",
            m.edges(),
            m_prime.edges(),
            b1.edges(),
            b2.edges(),
            g.edges().collect::<alloc::vec::Vec<_>>()
        )));
    }
    Ok(report)
}
