//! Gated machines: the universal machine composed with a primitive
//! recursive range gate. On input x the gate machine simulates the universal
//! machine; if that halts having consumed l bits, it searches j = 1, 2, ...
//! for a point where the gate term has taken more than l distinct values,
//! and halts with the simulated output once it finds one. The domain is
//! therefore { x in dom(U) : the gate's range eventually exceeds |x| }:
//! an infinite-range gate leaves the universal domain untouched, while a
//! gate of range size k admits only programs shorter than k.
//!
//! The gate tests the consumed length after the simulated run instead of
//! testing |x| up front: an on-demand machine cannot know its input length
//! in advance, and the two orders define the same domain because the gate
//! predicate depends only on |x|. Prefix-freeness is inherited from the
//! universal machine.
//!
//! Step accounting: every simulated action costs one step (including the
//! simulated halt, which switches to the search phase), then each search
//! probe costs one step; the probe that satisfies the gate is the halt step.
//! With the identity gate, a program of length l needs l + 1 probes, so a
//! run of the universal machine within budget b is matched by a gated run
//! within b + l + 1.

use alloc::rc::Rc;

use num_bigint::BigUint;

use crate::bits::BitString;
use crate::enumeration::{Universal, UniversalRun};
use crate::machine::{Machine, MachineRun, StepEvent};
use crate::pr::{unary_from_index, PrArityError, PrTerm, RangeCounter};

/// The universal machine behind a unary primitive recursive range gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatedMachine {
    gate: PrTerm,
}

impl GatedMachine {
    pub fn gate(&self) -> &PrTerm {
        &self.gate
    }
}

/// Build the gate machine for a unary term.
pub fn build_gated(gate: PrTerm) -> Result<GatedMachine, PrArityError> {
    if gate.arity() != 1 {
        return Err(PrArityError::WrongArgumentCount {
            expected: 1,
            got: gate.arity() as usize,
        });
    }
    Ok(GatedMachine { gate })
}

/// The computable index transformation behind the gate construction: the
/// i-th unary primitive recursive function (under the total Godel coding)
/// becomes a gate machine. Varying i sweeps machines whose universality is
/// equivalent to the i-th function having infinite range.
pub fn gated_from_pr_index(i: &BigUint) -> GatedMachine {
    GatedMachine {
        gate: unary_from_index(i),
    }
}

/// Budget sufficient for a gated run to replay a universal run of
/// `inner_budget` steps on a program of length at most `max_len`, when the
/// gate needs at most one probe per unit of length (identity-like gates).
pub fn gated_budget(inner_budget: u64, max_len: u64) -> u64 {
    inner_budget + max_len + 1
}

#[derive(Clone)]
pub struct GatedRun {
    gate: Rc<PrTerm>,
    consumed: u64,
    phase: GatePhase,
}

#[derive(Clone)]
enum GatePhase {
    Sim(UniversalRun),
    Search {
        output: BitString,
        counter: RangeCounter,
    },
    Halted(BitString),
}

impl Machine for GatedMachine {
    type Run = GatedRun;

    fn spawn(&self) -> GatedRun {
        GatedRun {
            gate: Rc::new(self.gate.clone()),
            consumed: 0,
            phase: GatePhase::Sim(Universal.spawn()),
        }
    }
}

impl MachineRun for GatedRun {
    fn step(&mut self) -> StepEvent {
        match &mut self.phase {
            GatePhase::Sim(inner) => match inner.step() {
                StepEvent::Ran => StepEvent::Ran,
                StepEvent::NeedsBit => StepEvent::NeedsBit,
                StepEvent::Halted => {
                    self.phase = GatePhase::Search {
                        output: inner.output(),
                        counter: RangeCounter::new(self.gate.clone()),
                    };
                    StepEvent::Ran
                }
            },
            GatePhase::Search { output, counter } => {
                if counter.probe() > self.consumed {
                    self.phase = GatePhase::Halted(core::mem::take(output));
                    StepEvent::Halted
                } else {
                    StepEvent::Ran
                }
            }
            GatePhase::Halted(_) => StepEvent::Halted,
        }
    }

    fn feed(&mut self, bit: bool) {
        match &mut self.phase {
            GatePhase::Sim(inner) => {
                self.consumed += 1;
                inner.feed(bit);
            }
            _ => unreachable!("the gate phases never read"),
        }
    }

    fn output(&self) -> BitString {
        match &self.phase {
            GatePhase::Sim(inner) => inner.output(),
            GatePhase::Search { output, .. } => output.clone(),
            GatePhase::Halted(output) => output.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::explore_domain;
    use crate::pr::terms;
    use alloc::collections::BTreeSet;

    #[test]
    fn build_requires_unary_gate() {
        assert!(build_gated(terms::identity()).is_ok());
        assert!(build_gated(terms::add()).is_err());
        assert!(build_gated(PrTerm::zero()).is_err());
    }

    #[test]
    fn constant_gate_has_empty_domain() {
        // Range size 1 admits only |x| = 0, and ε is not in dom(U).
        let g = build_gated(terms::const_unary(7)).unwrap();
        let report = explore_domain(&g, 4, 400);
        assert!(report.halting.is_empty());
    }

    #[test]
    fn range_three_gate_admits_only_short_programs() {
        let g = build_gated(terms::capped_shift(2)).unwrap();
        let report = explore_domain(&g, 5, 500);
        assert!(!report.halting.is_empty());
        for p in report.halting.keys() {
            assert!(p.len() < 3, "program {p} too long for the gate");
        }
        // The shortest print program survives the gate.
        assert!(report.halting.contains_key(&crate::bits::bits("11")));
    }

    #[test]
    fn identity_gate_agrees_with_universal() {
        let depth = 5;
        let budget = 80;
        let u_report = explore_domain(&Universal, depth, budget);
        let g = build_gated(terms::identity()).unwrap();
        let g_report = explore_domain(&g, depth, gated_budget(budget, depth));
        let u_set: BTreeSet<_> = u_report.halting.keys().cloned().collect();
        let g_set: BTreeSet<_> = g_report.halting.keys().cloned().collect();
        assert_eq!(u_set, g_set);
        for (p, info) in &u_report.halting {
            assert_eq!(g_report.halting[p].output, info.output);
        }
    }

    #[test]
    fn gated_domain_is_subset_of_universal() {
        for gate in [terms::parity(), terms::capped_shift(3), terms::identity()] {
            let g = build_gated(gate).unwrap();
            let g_report = explore_domain(&g, 5, 300);
            let u_report = explore_domain(&Universal, 5, 300);
            for p in g_report.halting.keys() {
                assert!(u_report.halting.contains_key(p), "{p} not in dom(U)");
            }
        }
    }

    #[test]
    fn finite_range_bound_over_full_exploration() {
        // Gates of range size k in {1,2,3,4}: every domain element has
        // length < k, exhaustively to depth k.
        for c in 0..4u64 {
            let k = c + 1;
            let g = build_gated(terms::capped_shift(c)).unwrap();
            let report = explore_domain(&g, k, 600);
            for p in report.halting.keys() {
                assert!((p.len() as u64) < k);
            }
        }
    }

    #[test]
    fn index_transformation_is_total() {
        for i in 0..50u64 {
            let g = gated_from_pr_index(&BigUint::from(i));
            assert_eq!(g.gate().arity(), 1);
            // A budgeted exploration must terminate and stay prefix-free.
            let report = explore_domain(&g, 3, 60);
            assert!(report.is_prefix_free());
        }
    }

    #[test]
    fn outputs_survive_the_gate() {
        let g = build_gated(terms::identity()).unwrap();
        // Print program for "01": header 1, gamma(2) = 011, payload 01.
        let p = crate::bits::bits("101101");
        let r = crate::machine::run_machine(&g, &p, 100);
        assert_eq!(r.domain_output(p.len()), Some(&crate::bits::bits("01")));
    }

    #[test]
    fn gate_search_is_budgeted() {
        // A constant gate never passes: the run must hit the budget, not
        // spin forever.
        let g = build_gated(terms::const_unary(0)).unwrap();
        let p = crate::bits::bits("11");
        let r = crate::machine::run_machine(&g, &p, 1000);
        assert!(matches!(
            r,
            crate::machine::RunResult::OutOfBudget { .. }
        ));
    }

    #[test]
    fn tracked_consumption_matches_path() {
        let g = build_gated(terms::identity()).unwrap();
        let mut run = g.spawn();
        let p = crate::bits::bits("11");
        let mut consumed = 0;
        for _ in 0..20 {
            match run.step() {
                StepEvent::NeedsBit => {
                    run.feed(p.bit(consumed));
                    consumed += 1;
                }
                StepEvent::Halted => break,
                StepEvent::Ran => {}
            }
        }
        assert_eq!(consumed, 2);
        assert_eq!(run.output(), BitString::new());
    }
}
