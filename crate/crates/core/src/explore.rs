//! Domain exploration: walk the binary tree of read answers and report every
//! halting program found, plus the unresolved frontier, with exact mass
//! accounting.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use core::fmt;

use crate::bits::{check_prefix_free, BitString};
use crate::dyadic::{kraft_sum, kraft_sum_lengths, Dyadic};
use crate::machine::{Machine, MachineRun, StepEvent};

/// A halting program found during exploration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltInfo {
    pub output: BitString,
    /// Steps from the start of the run to and including the halt action.
    pub steps: u64,
}

/// Finite snapshot of a machine's domain.
///
/// `halting` maps each program found to its output and step count. A
/// frontier entry is the consumed path of a branch that is still unresolved:
/// either its run exhausted the node budget, or it requested a bit at
/// `max_depth`. The branch may still halt or split later, so its full
/// 2^-depth mass stays in the upper bound.
///
/// Every leaf of the explored tree is either halting or frontier, so
/// kraft_sum(halting) + Σ 2^-depth over the frontier is exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainReport {
    pub halting: BTreeMap<BitString, HaltInfo>,
    pub frontier: BTreeSet<BitString>,
    pub max_depth: u64,
    pub node_budget: u64,
}

impl DomainReport {
    /// Exact Σ 2^-|p| over the halting programs.
    pub fn kraft_lower(&self) -> Dyadic {
        kraft_sum(self.halting.keys())
    }

    /// Exact Σ 2^-depth over the frontier.
    pub fn frontier_mass(&self) -> Dyadic {
        kraft_sum_lengths(self.frontier.iter().map(|p| p.len() as u64))
    }

    /// The halting programs as a set of strings.
    pub fn halting_set(&self) -> BTreeSet<BitString> {
        self.halting.keys().cloned().collect()
    }

    pub fn is_prefix_free(&self) -> bool {
        check_prefix_free(self.halting.keys())
    }
}

impl fmt::Display for DomainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "domain report (depth {}, budget {})",
            self.max_depth, self.node_budget
        )?;
        for (p, info) in &self.halting {
            writeln!(f, "  halt {} -> {} [{} steps]", p, info.output, info.steps)?;
        }
        for p in &self.frontier {
            writeln!(f, "  open {}", p)?;
        }
        Ok(())
    }
}

/// Explore the tree of read answers of `m` down to `max_depth` consumed
/// bits, giving each branch `node_budget` steps in total (cumulative along
/// the path, so membership in `halting` coincides with
/// `run_machine(m, p, node_budget)` halting on exactly p).
///
/// The walk is breadth-first over (depth, steps), but the result is uniquely
/// determined by the arguments regardless of traversal order.
pub fn explore_domain<M: Machine>(m: &M, max_depth: u64, node_budget: u64) -> DomainReport {
    let mut report = DomainReport {
        halting: BTreeMap::new(),
        frontier: BTreeSet::new(),
        max_depth,
        node_budget,
    };

    struct Node<R> {
        run: R,
        path: BitString,
        steps: u64,
    }

    let mut queue = VecDeque::new();
    queue.push_back(Node {
        run: m.spawn(),
        path: BitString::new(),
        steps: 0,
    });

    while let Some(Node {
        mut run,
        path,
        mut steps,
    }) = queue.pop_front()
    {
        loop {
            if steps == node_budget {
                report.frontier.insert(path);
                break;
            }
            steps += 1;
            match run.step() {
                StepEvent::Ran => {}
                StepEvent::Halted => {
                    report.halting.insert(
                        path,
                        HaltInfo {
                            output: run.output(),
                            steps,
                        },
                    );
                    break;
                }
                StepEvent::NeedsBit => {
                    if path.len() as u64 == max_depth {
                        report.frontier.insert(path);
                        break;
                    }
                    let mut zero = run.clone();
                    zero.feed(false);
                    queue.push_back(Node {
                        run: zero,
                        path: path.child(false),
                        steps,
                    });
                    run.feed(true);
                    queue.push_back(Node {
                        run,
                        path: path.child(true),
                        steps,
                    });
                    break;
                }
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::machine::testutil::{emit_then_halt, halt0, ladder_book};
    use crate::machine::{run_machine, DivergeMachine, RunResult};

    // Brute-force oracle: enumerate all strings of length <= depth and check
    // each with run_machine directly.
    fn brute_force_halting<M: Machine>(
        m: &M,
        max_depth: u64,
        budget: u64,
    ) -> BTreeSet<BitString> {
        let mut found = BTreeSet::new();
        for len in 0..=max_depth as usize {
            for v in 0u64..(1u64 << len) {
                let s = BitString::from_bits((0..len).rev().map(|i| v >> i & 1 == 1));
                if let RunResult::Halted { consumed, .. } = run_machine(m, &s, budget) {
                    if consumed == len {
                        found.insert(s);
                    }
                }
            }
        }
        found
    }

    #[test]
    fn halt0_report() {
        let report = explore_domain(&halt0(), 4, 100);
        assert_eq!(report.halting_set(), BTreeSet::from([bits("0")]));
        assert_eq!(report.frontier, BTreeSet::from([bits("1")]));
        assert_eq!(report.halting[&bits("0")].output, BitString::new());
    }

    #[test]
    fn codebook_report_matches_brute_force() {
        let m = ladder_book();
        let report = explore_domain(&m, 8, 100);
        assert_eq!(
            report.halting_set(),
            BTreeSet::from([bits("0"), bits("10"), bits("110")])
        );
        assert_eq!(report.frontier, BTreeSet::from([bits("111")]));
        assert_eq!(report.halting_set(), brute_force_halting(&m, 8, 100));
    }

    #[test]
    fn immediate_halt_has_domain_epsilon() {
        let m = emit_then_halt("01");
        for (depth, budget) in [(0, 10), (3, 5), (6, 1000)] {
            let report = explore_domain(&m, depth, budget);
            assert_eq!(report.halting_set(), BTreeSet::from([BitString::new()]));
            assert!(report.frontier.is_empty());
        }
    }

    #[test]
    fn diverge_machine_has_empty_halting_set() {
        let report = explore_domain(&DivergeMachine, 6, 500);
        assert!(report.halting.is_empty());
        assert_eq!(report.frontier, BTreeSet::from([BitString::new()]));
    }

    #[test]
    fn mass_is_conserved_exactly() {
        for (depth, budget) in [(0, 1), (1, 2), (4, 7), (8, 100), (10, 1000)] {
            let report = explore_domain(&halt0(), depth, budget);
            let total = report.kraft_lower().add(&report.frontier_mass());
            assert_eq!(total, Dyadic::one(), "at ({depth},{budget})");
            assert!(report.is_prefix_free());
        }
    }

    #[test]
    fn halting_grows_monotonically() {
        let m = ladder_book();
        let mut prev = BTreeSet::new();
        for (depth, budget) in [(0, 1), (1, 2), (2, 3), (3, 8), (5, 50), (8, 100)] {
            let cur = explore_domain(&m, depth, budget).halting_set();
            assert!(prev.is_subset(&cur));
            prev = cur;
        }
    }

    #[test]
    fn consistency_with_run_machine() {
        // For |x| <= depth: x in halting iff run_machine halts on exactly x.
        for m in [halt0(), emit_then_halt("1")] {
            let (depth, budget) = (5, 60);
            let report = explore_domain(&m, depth, budget);
            assert_eq!(report.halting_set(), brute_force_halting(&m, depth, budget));
        }
    }

    #[test]
    fn frontier_and_halting_are_incomparable() {
        let report = explore_domain(&ladder_book(), 8, 100);
        for h in report.halting.keys() {
            for f in &report.frontier {
                assert!(!h.is_prefix_of(f) && !f.is_prefix_of(h));
            }
        }
    }

    #[test]
    fn determinism() {
        let a = explore_domain(&ladder_book(), 8, 100);
        let b = explore_domain(&ladder_book(), 8, 100);
        assert_eq!(a, b);
    }

    #[test]
    fn steps_match_run_machine_accounting() {
        let report = explore_domain(&halt0(), 4, 100);
        // read (1 step) + halt (1 step)
        assert_eq!(report.halting[&bits("0")].steps, 2);
        match run_machine(&halt0(), &bits("0"), 2) {
            RunResult::Halted { .. } => {}
            other => panic!("expected halt at budget 2, got {other:?}"),
        }
    }
}
