//! Exact interval approximation of halting probabilities, certification of
//! leading binary digits, and recovery of halting answers from a certified
//! digit prefix.
//!
//! # Why the recovery procedure is correct
//!
//! Let w be a true length-n prefix of the binary expansion of the halting
//! probability of m (terminating-expansion convention), and let t = 0.w as
//! an exact dyadic. Then t <= Omega(m) < t + 2^-n. Enumerate the domain with
//! growing depth and budget; the found mass (the interval's lower end)
//! converges to Omega(m) from below, so it eventually reaches t. At that
//! point the mass of every not-yet-found halting program is below
//! Omega(m) - lower < 2^-n, so no program of length <= n is missing: the
//! found set answers every halting question up to length n, and everything
//! else of length <= n diverges.

use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::Zero as _;

use crate::bits::BitString;
use crate::dyadic::{kraft_sum, Dyadic};
use crate::explore::{explore_domain, DomainReport};
use crate::machine::{CodebookMachine, Machine};

/// An exact enclosure of a halting probability.
///
/// From a finite exploration, `lower` is the mass of the halting programs
/// found and `upper` adds the full mass of the unresolved frontier, so the
/// true halting probability lies in the closed interval [lower, upper].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaInterval {
    pub lower: Dyadic,
    pub upper: Dyadic,
    /// The exploration this interval came from, when it came from one.
    pub report: Option<DomainReport>,
}

impl OmegaInterval {
    /// An interval [lower, upper] given directly.
    pub fn new(lower: Dyadic, upper: Dyadic) -> Self {
        assert!(lower <= upper, "interval ends out of order");
        OmegaInterval {
            lower,
            upper,
            report: None,
        }
    }

    /// The degenerate interval of an exactly known value.
    pub fn point(value: Dyadic) -> Self {
        OmegaInterval {
            lower: value.clone(),
            upper: value,
            report: None,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, value: &Dyadic) -> bool {
        &self.lower <= value && value <= &self.upper
    }

    /// True iff `self` is contained in `other`.
    pub fn is_subinterval_of(&self, other: &OmegaInterval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }
}

impl fmt::Display for OmegaInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// Explore the domain of `m` and return the exact interval enclosing its
/// halting probability. Raising either parameter never widens the interval.
pub fn omega_bounds<M: Machine>(m: &M, max_depth: u64, node_budget: u64) -> OmegaInterval {
    let report = explore_domain(m, max_depth, node_budget);
    interval_of_report(report)
}

/// The interval determined by an existing exploration report.
pub fn interval_of_report(report: DomainReport) -> OmegaInterval {
    let lower = report.kraft_lower();
    let upper = lower.add(&report.frontier_mass());
    OmegaInterval {
        lower,
        upper,
        report: Some(report),
    }
}

/// The exact halting probability of a codebook machine: the Kraft sum of its
/// codebook. Equals the limit of [`omega_bounds`] lower ends as the
/// parameters grow.
pub fn omega_exact(m: &CodebookMachine) -> Dyadic {
    kraft_sum(m.codewords())
}

/// The longest digit string w such that every value the interval may contain
/// has a binary expansion beginning `0.w` (digits taken by the floor rule,
/// i.e. the terminating expansion for dyadics). Returns ε as soon as the
/// interval straddles a dyadic boundary, including upper ends that reach 1.
///
/// A point interval is the exactly-known case: the full terminating
/// expansion is emitted, with the conventions that both 0 and 1 yield ε.
pub fn certified_bits(iv: &OmegaInterval) -> BitString {
    if iv.is_point() {
        return iv.lower.terminating_bits();
    }
    let mut out = BitString::new();
    let mut floor = num_bigint::BigUint::zero();
    for n in 1u64.. {
        floor <<= 1u8;
        if iv.lower.floor_shl(n).bit(0) {
            floor += 1u8;
        }
        // Need upper < (floor+1) / 2^n for digit n to be pinned everywhere
        // in [lower, upper].
        let bound = Dyadic::new(&floor + 1u8, n);
        if iv.upper < bound {
            out.push(floor.bit(0));
        } else {
            break;
        }
    }
    out
}

/// One entry per string of length at most n: does the machine halt on it?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltingTable {
    pub prefix_len: usize,
    entries: BTreeMap<BitString, bool>,
}

impl HaltingTable {
    pub fn halts(&self, x: &BitString) -> Option<bool> {
        self.entries.get(x).copied()
    }

    /// All entries in shortlex order. There are exactly 2^(n+1) - 1.
    pub fn entries(&self) -> impl Iterator<Item = (&BitString, bool)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of [`halting_from_omega`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Resolved(HaltingTable),
    /// The round schedule ran out before the threshold was reached. Never a
    /// partial table.
    Inconclusive { rounds_run: u64, last_lower: Dyadic },
}

impl OracleOutcome {
    pub fn table(self) -> Option<HaltingTable> {
        match self {
            OracleOutcome::Resolved(t) => Some(t),
            OracleOutcome::Inconclusive { .. } => None,
        }
    }
}

/// The reproducible default round schedule: (depth, budget) = (k, 2^k) for
/// k = 1, 2, ... Budgets saturate near u64::MAX rather than overflow.
pub fn default_schedule() -> impl Iterator<Item = (u64, u64)> {
    (1u64..).map(|k| (k, 1u64.checked_shl(k.min(62) as u32).unwrap_or(u64::MAX)))
}

/// Recover the answers to all halting questions of length at most
/// n = |omega_prefix| from a true length-n prefix of the binary expansion of
/// the halting probability of `m`.
///
/// Runs exploration rounds from `schedule` until the found mass reaches
/// 0.omega_prefix, then classifies every string of length <= n. Under the
/// true-prefix precondition this terminates on any unbounded schedule
/// whenever the remaining mass can be exhausted (always, for codebook
/// machines); on a truncated schedule it reports `Inconclusive` instead of
/// guessing. A degenerate empty prefix still runs one round, so the ε
/// question is answered from an actual enumeration rather than vacuously;
/// an empty prefix carries no information, though, and that single round
/// can miss a slow halt on ε.
///
/// If `omega_prefix` is not a true prefix the procedure may never terminate
/// (with an unbounded schedule) or report `Inconclusive` (with a truncated
/// one); it never returns a wrong table for a true prefix.
pub fn halting_from_omega<M, I>(m: &M, omega_prefix: &BitString, schedule: I) -> OracleOutcome
where
    M: Machine,
    I: IntoIterator<Item = (u64, u64)>,
{
    let n = omega_prefix.len();
    let threshold = Dyadic::new(omega_prefix.as_numeral(), n as u64);
    let mut rounds_run = 0u64;
    let mut last_lower = Dyadic::zero();

    for (depth, budget) in schedule {
        rounds_run += 1;
        let report = explore_domain(m, depth, budget);
        last_lower = report.kraft_lower();
        if last_lower >= threshold {
            let mut entries = BTreeMap::new();
            for len in 0..=n {
                for v in 0u64..(1u64 << len) {
                    let x = BitString::from_bits((0..len).rev().map(|i| v >> i & 1 == 1));
                    let halts = report.halting.contains_key(&x);
                    entries.insert(x, halts);
                }
            }
            debug_assert_eq!(entries.len(), (1usize << (n + 1)) - 1);
            return OracleOutcome::Resolved(HaltingTable {
                prefix_len: n,
                entries,
            });
        }
    }

    OracleOutcome::Inconclusive {
        rounds_run,
        last_lower,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::machine::testutil::{halt0, ladder_book};
    use crate::machine::DivergeMachine;
    use alloc::collections::BTreeSet;
    use alloc::vec::Vec;

    fn frac(num: u64, exp: u64) -> Dyadic {
        Dyadic::new(num_bigint::BigUint::from(num), exp)
    }

    #[test]
    fn halt0_bounds() {
        let iv = omega_bounds(&halt0(), 4, 100);
        assert_eq!(iv.lower, frac(1, 1));
        assert_eq!(iv.upper, Dyadic::one());
    }

    #[test]
    fn ladder_bounds() {
        // Frontier is the dead branch 111 at depth 3: upper stays 1.
        let iv = omega_bounds(&ladder_book(), 8, 100);
        assert_eq!(iv.lower, frac(7, 3));
        assert_eq!(iv.upper, Dyadic::one());
    }

    #[test]
    fn diverge_bounds() {
        let iv = omega_bounds(&DivergeMachine, 6, 100);
        assert_eq!(iv.lower, Dyadic::zero());
        assert!(iv.upper <= Dyadic::one());
    }

    #[test]
    fn exact_examples() {
        let single = CodebookMachine::from_codewords([bits("0")]).unwrap();
        assert_eq!(omega_exact(&single), frac(1, 1));
        assert_eq!(omega_exact(&ladder_book()), frac(7, 3));
        let empty = CodebookMachine::from_codewords([]).unwrap();
        assert_eq!(omega_exact(&empty), Dyadic::zero());
    }

    #[test]
    fn exact_value_is_always_enclosed() {
        let m = ladder_book();
        let omega = omega_exact(&m);
        for (d, b) in [(0, 1), (1, 2), (3, 10), (6, 50), (9, 400)] {
            assert!(omega_bounds(&m, d, b).contains(&omega), "at ({d},{b})");
        }
    }

    #[test]
    fn intervals_nest_under_parameter_growth() {
        let m = ladder_book();
        let params = [(0, 1), (1, 4), (2, 8), (4, 30), (8, 100)];
        let ivs: Vec<OmegaInterval> = params
            .iter()
            .map(|&(d, b)| omega_bounds(&m, d, b))
            .collect();
        for pair in ivs.windows(2) {
            assert!(pair[1].is_subinterval_of(&pair[0]));
        }
    }

    #[test]
    fn certified_bits_of_open_intervals() {
        // Upper end 1: the first digit is undetermined.
        assert_eq!(
            certified_bits(&OmegaInterval::new(frac(1, 1), Dyadic::one())),
            BitString::new()
        );
        // Everything in [7/8, 15/16] starts 0.111.
        assert_eq!(
            certified_bits(&OmegaInterval::new(frac(7, 3), frac(15, 4))),
            bits("111")
        );
        // Straddling 1/2 certifies nothing.
        assert_eq!(
            certified_bits(&OmegaInterval::new(frac(3, 3), frac(1, 1))),
            BitString::new()
        );
        // [3/8, 7/16] pins exactly three digits.
        assert_eq!(
            certified_bits(&OmegaInterval::new(frac(3, 3), frac(7, 4))),
            bits("011")
        );
    }

    #[test]
    fn certified_bits_of_point_intervals() {
        // Exactly 3/8 = 0.011, the terminating expansion.
        assert_eq!(
            certified_bits(&OmegaInterval::point(frac(3, 3))),
            bits("011")
        );
        // A codebook with Kraft sum 3/8 gives the same point.
        let m = CodebookMachine::from_codewords([bits("01"), bits("100")]).unwrap();
        assert_eq!(omega_exact(&m), frac(3, 3));
        assert_eq!(
            certified_bits(&OmegaInterval::point(omega_exact(&m))),
            bits("011")
        );
        // The conventions for the two expansion-less endpoints.
        assert_eq!(
            certified_bits(&OmegaInterval::point(Dyadic::zero())),
            BitString::new()
        );
        assert_eq!(
            certified_bits(&OmegaInterval::point(Dyadic::one())),
            BitString::new()
        );
    }

    #[test]
    fn certified_bits_monotone_under_nesting() {
        let m = ladder_book();
        let mut prev = BitString::new();
        for (d, b) in [(0, 1), (2, 8), (4, 30), (8, 100)] {
            let cur = certified_bits(&omega_bounds(&m, d, b));
            assert!(prev.is_prefix_of(&cur));
            prev = cur;
        }
        // The exactly-known point refines every exploration interval.
        let full = certified_bits(&OmegaInterval::point(omega_exact(&m)));
        assert!(prev.is_prefix_of(&full));
        assert_eq!(full, bits("111"));
    }

    #[test]
    fn oracle_two_codewords() {
        let m = CodebookMachine::from_codewords([bits("0"), bits("10")]).unwrap();
        assert_eq!(omega_exact(&m), frac(3, 2)); // 0.11
        let table = halting_from_omega(&m, &bits("11"), default_schedule())
            .table()
            .unwrap();
        assert_eq!(table.len(), 7);
        let halting: BTreeSet<&BitString> = table
            .entries()
            .filter_map(|(x, h)| h.then_some(x))
            .collect();
        assert_eq!(halting, BTreeSet::from([&bits("0"), &bits("10")]));
        assert_eq!(table.halts(&BitString::new()), Some(false));
        assert_eq!(table.halts(&bits("11")), Some(false));
    }

    #[test]
    fn oracle_ladder() {
        let m = ladder_book();
        let table = halting_from_omega(&m, &bits("111"), default_schedule())
            .table()
            .unwrap();
        assert_eq!(table.len(), 15);
        for (x, halts) in table.entries() {
            let expected = [bits("0"), bits("10"), bits("110")].contains(x);
            assert_eq!(halts, expected, "at {x}");
        }
    }

    #[test]
    fn oracle_empty_prefix_runs_one_round() {
        // The ε question is answered from round one.
        let m = CodebookMachine::from_codewords([BitString::new()]).unwrap();
        let table = halting_from_omega(&m, &BitString::new(), default_schedule())
            .table()
            .unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.halts(&BitString::new()), Some(true));

        let table = halting_from_omega(&halt0(), &BitString::new(), default_schedule())
            .table()
            .unwrap();
        assert_eq!(table.halts(&BitString::new()), Some(false));
    }

    #[test]
    fn oracle_reports_inconclusive_on_truncated_schedule() {
        // The diverge machine never reaches a positive threshold.
        let out = halting_from_omega(&DivergeMachine, &bits("1"), default_schedule().take(5));
        assert_eq!(
            out,
            OracleOutcome::Inconclusive {
                rounds_run: 5,
                last_lower: Dyadic::zero()
            }
        );
    }

    #[test]
    fn oracle_agrees_with_brute_force() {
        let m = ladder_book();
        let table = halting_from_omega(&m, &bits("111"), default_schedule())
            .table()
            .unwrap();
        let report = explore_domain(&m, 3, 1 << 12);
        for (x, halts) in table.entries() {
            assert_eq!(halts, report.halting.contains_key(x));
        }
    }
}
