//! Online Kraft-Chaitin codeword allocation.
//!
//! The allocator hands out prefix-free codewords of requested lengths, in
//! request order, as long as the total requested mass Σ 2^-n stays within 1.
//! The free space is kept as one node per depth (the binary-counter form of
//! the remaining mass), so a request of length n is servable exactly when
//! some free node sits at depth <= n, i.e. when the remaining mass is at
//! least 2^-n.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitString;
use crate::dyadic::{kraft_sum_lengths, Dyadic};

/// Request would push the total allocated mass past 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KraftExceeded {
    pub requested_len: u64,
    pub free_mass: Dyadic,
}

impl fmt::Display for KraftExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot allocate a codeword of length {}: free mass is only {}",
            self.requested_len, self.free_mass
        )
    }
}

/// Allocator state: the free nodes (one per depth, mutually
/// prefix-incomparable) and the codewords handed out so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KcState {
    free: BTreeMap<u64, BitString>,
    allocated: Vec<(u64, BitString)>,
}

impl KcState {
    /// Fresh state: the whole unit interval is free (the node ε at depth 0).
    pub fn new() -> Self {
        let mut free = BTreeMap::new();
        free.insert(0, BitString::new());
        KcState {
            free,
            allocated: Vec::new(),
        }
    }

    /// The free nodes as (depth, prefix) pairs.
    pub fn free_nodes(&self) -> impl Iterator<Item = (u64, &BitString)> {
        self.free.iter().map(|(d, p)| (*d, p))
    }

    /// The codewords allocated so far, in request order, with their
    /// requested lengths.
    pub fn allocated(&self) -> &[(u64, BitString)] {
        &self.allocated
    }

    /// Exact Σ 2^-depth over the free nodes.
    pub fn free_mass(&self) -> Dyadic {
        kraft_sum_lengths(self.free.keys().copied())
    }

    /// Exact Σ 2^-length over the allocated codewords.
    pub fn allocated_mass(&self) -> Dyadic {
        kraft_sum_lengths(self.allocated.iter().map(|(n, _)| *n))
    }

    /// Allocate a codeword of exactly length `n`.
    ///
    /// The result depends only on the requests seen so far, and earlier
    /// codewords are never revoked. The deepest adequate free node is split
    /// (the binary-counter borrow), which is the unique choice that keeps
    /// the free depths distinct; the codeword takes the all-zeros extension
    /// and the one-sided siblings along it become the new free nodes.
    pub fn allocate(&mut self, n: u64) -> Result<BitString, KraftExceeded> {
        let depth = match self.free.range(..=n).next_back() {
            Some((d, _)) => *d,
            None => {
                return Err(KraftExceeded {
                    requested_len: n,
                    free_mass: self.free_mass(),
                })
            }
        };
        let node = self.free.remove(&depth).expect("depth came from the map");
        let mut word = node;
        for d in depth..n {
            self.free.insert(d + 1, word.child(true));
            word.push(false);
        }
        self.allocated.push((n, word.clone()));
        debug_assert!(self.mass_is_conserved());
        Ok(word)
    }

    /// Σ free + Σ allocated = 1, exactly.
    pub fn mass_is_conserved(&self) -> bool {
        self.free_mass().add(&self.allocated_mass()) == Dyadic::one()
    }
}

impl Default for KcState {
    fn default() -> Self {
        Self::new()
    }
}
