//! Virtual subgraphs of a list oracle.
//!
//! [`CapView`] is what the local greedy engine consumes: a vertex set with a
//! capacity per vertex and full neighbourhood enumeration. Plain matchings use
//! capacity 1; b-matchings use larger ones.
use alloc::vec::Vec;
use core::cell::RefCell;

use hashbrown::HashMap;
use rand::Rng;

use crate::access::ListAccess;
use crate::error::Error;
use crate::graph::Vertex;
use crate::matching::Matching;
use crate::stats::OracleStats;

/// A capacitated subgraph presented through an oracle.
pub trait CapView {
    /// Size of the vertex id space.
    fn universe(&self) -> usize;
    /// Capacity of `v`; zero when `v` is not part of the view.
    fn capacity(&self, v: Vertex) -> Result<u32, Error>;
    /// Appends every neighbour of `v` inside the view to `out`.
    fn neighbors(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error>;
    fn stats(&self) -> &OracleStats;
}

impl<T: CapView + ?Sized> CapView for &T {
    fn universe(&self) -> usize {
        (**self).universe()
    }
    fn capacity(&self, v: Vertex) -> Result<u32, Error> {
        (**self).capacity(v)
    }
    fn neighbors(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        (**self).neighbors(v, out)
    }
    fn stats(&self) -> &OracleStats {
        (**self).stats()
    }
}

/// Vertex membership predicate of an induced view.
pub trait Membership {
    fn contains(&self, v: Vertex) -> Result<bool, Error>;
}

impl<F: Fn(Vertex) -> bool> Membership for F {
    fn contains(&self, v: Vertex) -> Result<bool, Error> {
        Ok(self(v))
    }
}

/// Every vertex below `domain`.
#[derive(Debug, Clone, Copy)]
pub struct Domain(pub usize);

impl Membership for Domain {
    fn contains(&self, v: Vertex) -> Result<bool, Error> {
        Ok(v < self.0)
    }
}

/// Vertices below `domain` left unmatched by a matching.
#[derive(Debug, Clone, Copy)]
pub struct Unmatched<'m> {
    pub matching: &'m Matching,
    pub domain: usize,
}

impl Membership for Unmatched<'_> {
    fn contains(&self, v: Vertex) -> Result<bool, Error> {
        Ok(v < self.domain && !self.matching.is_matched(v))
    }
}

/// Attempts allowed per vertex count before rejection sampling gives up.
pub const DEFAULT_PROBE_CAP_FACTOR: u64 = 64;

/// The subgraph of a list oracle induced by a membership predicate.
pub struct InducedView<L, P> {
    base: L,
    member: P,
    probe_cap: u64,
    degrees: RefCell<HashMap<Vertex, usize>>,
}

impl<L: ListAccess, P: Membership> InducedView<L, P> {
    pub fn new(base: L, member: P) -> Self {
        let probe_cap = DEFAULT_PROBE_CAP_FACTOR * base.vertex_count().max(1) as u64;
        InducedView {
            base,
            member,
            probe_cap,
            degrees: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_probe_cap(mut self, cap: u64) -> Self {
        self.probe_cap = cap;
        self
    }

    pub fn base(&self) -> &L {
        &self.base
    }

    pub fn contains(&self, v: Vertex) -> Result<bool, Error> {
        self.member.contains(v)
    }

    fn base_degree(&self, v: Vertex) -> Result<usize, Error> {
        if let Some(&d) = self.degrees.borrow().get(&v) {
            return Ok(d);
        }
        let d = self.base.degree(v)?;
        self.degrees.borrow_mut().insert(v, d);
        Ok(d)
    }

    /// A uniformly random neighbour of `v` inside the view, by rejection
    /// sampling on the base list. Fails with [`Error::Exhausted`] once the
    /// probe cap is spent.
    pub fn random_neighbor<R: Rng + ?Sized>(&self, v: Vertex, rng: &mut R) -> Result<Vertex, Error> {
        let d = self.base_degree(v)?;
        if d == 0 {
            return Err(Error::Exhausted { vertex: v, attempts: 0 });
        }
        for _ in 0..self.probe_cap {
            let i = rng.gen_range(0..d);
            let w = self.base.list_probe(v, i)?.expect("index below the degree");
            if self.member.contains(w)? {
                return Ok(w);
            }
        }
        Err(Error::Exhausted {
            vertex: v,
            attempts: self.probe_cap,
        })
    }
}

impl<L: ListAccess, P: Membership> CapView for InducedView<L, P> {
    fn universe(&self) -> usize {
        self.base.vertex_count()
    }

    fn capacity(&self, v: Vertex) -> Result<u32, Error> {
        Ok(self.member.contains(v)? as u32)
    }

    fn neighbors(&self, v: Vertex, out: &mut Vec<Vertex>) -> Result<(), Error> {
        if !self.member.contains(v)? {
            return Ok(());
        }
        let mut i = 0;
        while let Some(w) = self.base.list_probe(v, i)? {
            if self.member.contains(w)? {
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
