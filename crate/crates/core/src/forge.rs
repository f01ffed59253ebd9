//! Forging machines with prescribed halting probabilities: given a strictly
//! increasing sequence of dyadic rationals, build a codebook machine whose
//! halting probability is exactly the last value. The construction is
//! online: extending the sequence extends the codebook without revoking
//! earlier codewords, so an unbounded increasing sequence grows a machine
//! whose halting probability converges to the sequence's limit.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::bits::{nat_to_string, BitString};
use crate::dyadic::Dyadic;
use crate::kraft::{KcState, KraftExceeded};
use crate::machine::{CodebookMachine, Machine, MachineRun, StepEvent};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForgeError {
    /// The sequence must be strictly increasing.
    NotIncreasing { position: usize },
    /// The sequence must stay within [0, 1].
    AboveOne { position: usize },
}

impl fmt::Display for ForgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForgeError::NotIncreasing { position } => {
                write!(f, "target {position} does not increase on its predecessor")
            }
            ForgeError::AboveOne { position } => write!(f, "target {position} exceeds 1"),
        }
    }
}

/// Incremental forge: feed increasing targets one at a time.
#[derive(Debug, Clone)]
pub struct ForgeBuilder {
    kc: KcState,
    book: Vec<(BitString, BitString)>,
    reached: Dyadic,
}

impl ForgeBuilder {
    pub fn new() -> Self {
        ForgeBuilder {
            kc: KcState::new(),
            book: Vec::new(),
            reached: Dyadic::zero(),
        }
    }

    /// The target mass reached so far.
    pub fn reached(&self) -> &Dyadic {
        &self.reached
    }

    /// The codewords allocated so far, in allocation order, with their
    /// outputs (the allocation ordinal under the length-lexicographic
    /// bijection).
    pub fn codewords(&self) -> &[(BitString, BitString)] {
        &self.book
    }

    /// Raise the halting probability to exactly `target`.
    ///
    /// The increment is split into its dyadic powers, most significant
    /// first, and each power 2^-n becomes one codeword of length n.
    pub fn push(&mut self, target: &Dyadic) -> Result<(), ForgeError> {
        let position = self.book.len();
        if target > &Dyadic::one() {
            return Err(ForgeError::AboveOne { position });
        }
        let increment = match target.checked_sub(&self.reached) {
            Some(d) if !d.is_zero() => d,
            _ => return Err(ForgeError::NotIncreasing { position }),
        };
        for n in increment.power_decomposition() {
            let word = self
                .kc
                .allocate(n)
                .unwrap_or_else(|e: KraftExceeded| unreachable!("target <= 1 guarantees mass: {e}"));
            let ordinal = BigUint::from(self.book.len());
            self.book.push((word, nat_to_string(&ordinal)));
        }
        self.reached = target.clone();
        Ok(())
    }

    /// The machine forged so far; its halting probability is exactly
    /// [`Self::reached`].
    pub fn machine(&self) -> CodebookMachine {
        let map: BTreeMap<BitString, BitString> = self.book.iter().cloned().collect();
        CodebookMachine::new(map).expect("the allocator only hands out prefix-free codewords")
    }
}

impl Default for ForgeBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// Build a machine whose halting probability is exactly `last(targets)`.
///
/// `targets` must be strictly increasing and at most 1. An empty sequence
/// forges the empty-domain codebook (halting probability 0).
pub fn forge_machine(targets: &[Dyadic]) -> Result<CodebookMachine, ForgeError> {
    let mut builder = ForgeBuilder::new();
    for t in targets {
        builder.push(t)?;
    }
    Ok(builder.machine())
}

// ---------------------------------------------------------------------------
// Optional universal splice
// ---------------------------------------------------------------------------

/// A forged codebook spliced with a universal branch: on `1 c` the machine
/// behaves as the codebook on c, and on `00 p` it behaves as the universal
/// machine on p (inputs starting `01` diverge). Its halting probability is
/// exactly half the forged mass plus a quarter of the universal machine's,
/// so a prescribed *exact* value is no longer attainable; the mode exists to
/// splice universality into a forged machine when the exact target can be
/// given up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplicedMachine {
    pub book: CodebookMachine,
}

#[derive(Clone)]
pub struct SplicedRun {
    book: alloc::rc::Rc<CodebookMachine>,
    phase: SplicePhase,
}

#[derive(Clone)]
enum SplicePhase {
    Start,
    SawZero,
    Dead,
    Book(<CodebookMachine as Machine>::Run),
    Universal(<crate::enumeration::Universal as Machine>::Run),
}

impl Machine for SplicedMachine {
    type Run = SplicedRun;

    fn spawn(&self) -> SplicedRun {
        SplicedRun {
            book: alloc::rc::Rc::new(self.book.clone()),
            phase: SplicePhase::Start,
        }
    }
}

impl MachineRun for SplicedRun {
    fn step(&mut self) -> StepEvent {
        match &mut self.phase {
            SplicePhase::Start | SplicePhase::SawZero => StepEvent::NeedsBit,
            SplicePhase::Dead => StepEvent::Ran,
            SplicePhase::Book(r) => r.step(),
            SplicePhase::Universal(r) => r.step(),
        }
    }

    fn feed(&mut self, bit: bool) {
        match &mut self.phase {
            SplicePhase::Start => {
                self.phase = if bit {
                    SplicePhase::Book(self.book.spawn())
                } else {
                    SplicePhase::SawZero
                };
            }
            SplicePhase::SawZero => {
                self.phase = if bit {
                    SplicePhase::Dead
                } else {
                    SplicePhase::Universal(crate::enumeration::Universal.spawn())
                };
            }
            SplicePhase::Dead => unreachable!("the dead branch never reads"),
            SplicePhase::Book(r) => r.feed(bit),
            SplicePhase::Universal(r) => r.feed(bit),
        }
    }

    fn output(&self) -> BitString {
        match &self.phase {
            SplicePhase::Book(r) => r.output(),
            SplicePhase::Universal(r) => r.output(),
            _ => BitString::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::check_prefix_free;
    use crate::explore::explore_domain;
    use crate::omega::omega_exact;
    use proptest::prelude::*;

    fn frac(num: u64, exp: u64) -> Dyadic {
        Dyadic::new(BigUint::from(num), exp)
    }

    #[test]
    fn single_target() {
        let m = forge_machine(&[frac(1, 1)]).unwrap();
        let words: Vec<&BitString> = m.codewords().collect();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].len(), 1);
        assert_eq!(omega_exact(&m), frac(1, 1));
    }

    #[test]
    fn three_targets() {
        // Increments 1/4, 1/8, 1/2 become codeword lengths 2, 3, 1.
        let m = forge_machine(&[frac(1, 2), frac(3, 3), frac(7, 3)]).unwrap();
        let mut lens: Vec<usize> = m.codewords().map(BitString::len).collect();
        lens.sort_unstable();
        assert_eq!(lens, [1, 2, 3]);
        assert_eq!(omega_exact(&m), frac(7, 3));
    }

    #[test]
    fn outputs_are_the_allocation_ordinals() {
        let m = forge_machine(&[frac(1, 2), frac(3, 3), frac(7, 3)]).unwrap();
        let mut builder = ForgeBuilder::new();
        for t in [frac(1, 2), frac(3, 3), frac(7, 3)] {
            builder.push(&t).unwrap();
        }
        for (k, (word, out)) in builder.codewords().iter().enumerate() {
            assert_eq!(out, &nat_to_string(&BigUint::from(k)));
            assert_eq!(m.book()[word], *out);
        }
    }

    #[test]
    fn rejects_bad_sequences() {
        assert_eq!(
            forge_machine(&[frac(1, 1), frac(1, 1)]).unwrap_err(),
            ForgeError::NotIncreasing { position: 1 }
        );
        assert_eq!(
            forge_machine(&[frac(1, 1), frac(1, 2)]).unwrap_err(),
            ForgeError::NotIncreasing { position: 1 }
        );
        assert_eq!(
            forge_machine(&[frac(3, 1)]).unwrap_err(),
            ForgeError::AboveOne { position: 0 }
        );
    }

    #[test]
    fn empty_sequence_forges_the_empty_book() {
        let m = forge_machine(&[]).unwrap();
        assert_eq!(omega_exact(&m), Dyadic::zero());
    }

    #[test]
    fn target_one_is_reachable() {
        let m = forge_machine(&[frac(1, 1), Dyadic::one()]).unwrap();
        assert_eq!(omega_exact(&m), Dyadic::one());
        // A single step to 1 allocates the empty codeword.
        let m = forge_machine(&[Dyadic::one()]).unwrap();
        assert_eq!(omega_exact(&m), Dyadic::one());
        assert_eq!(m.codewords().next(), Some(&BitString::new()));
    }

    #[test]
    fn extension_preserves_earlier_codewords() {
        let mut short = ForgeBuilder::new();
        short.push(&frac(1, 2)).unwrap();
        short.push(&frac(3, 3)).unwrap();
        let mut long = ForgeBuilder::new();
        for t in [frac(1, 2), frac(3, 3), frac(7, 3), frac(15, 4)] {
            long.push(&t).unwrap();
        }
        assert_eq!(
            &long.codewords()[..short.codewords().len()],
            short.codewords()
        );
    }

    proptest! {
        #[test]
        fn forge_is_exact(raw in proptest::collection::vec((1u64..1 << 20, 1u64..=24), 1..12)) {
            // Sort unique dyadics into a strictly increasing sequence <= 1.
            let mut targets: Vec<Dyadic> = raw
                .into_iter()
                .map(|(n, e)| frac(n % (1 << e), e))
                .filter(|d| !d.is_zero())
                .collect();
            targets.sort();
            targets.dedup();
            prop_assume!(!targets.is_empty());
            let m = forge_machine(&targets).unwrap();
            prop_assert_eq!(omega_exact(&m), targets.last().unwrap().clone());
            prop_assert!(check_prefix_free(m.codewords()));
        }
    }

    #[test]
    fn forged_machine_accepts_its_codewords() {
        use crate::machine::run_machine;
        let m = forge_machine(&[frac(1, 2), frac(3, 3)]).unwrap();
        for (word, out) in m.book() {
            let r = run_machine(&m, word, 1000);
            assert_eq!(r.domain_output(word.len()), Some(out));
        }
    }

    #[test]
    fn spliced_machine_carries_both_branches() {
        let book = forge_machine(&[frac(1, 2)]).unwrap();
        let spliced = SplicedMachine { book: book.clone() };
        // The book branch under prefix 1.
        let report = explore_domain(&spliced, 6, 200);
        for word in book.codewords() {
            let mut path = crate::bits::bits("1");
            path = path.concat(word);
            assert!(report.halting.contains_key(&path), "missing {path}");
        }
        // The universal branch under prefix 00: the shortest print program
        // `1 1` appears as `00 1 1`.
        assert!(report.halting.contains_key(&crate::bits::bits("0011")));
        // The 01 branch is dead.
        assert!(report.frontier.contains(&crate::bits::bits("01")));
        // Mass accounting: lower is book/2 plus found universal mass/4.
        let found_universal = explore_domain(&crate::enumeration::Universal, 4, 198);
        let expected = Dyadic::new(omega_exact(&book).numerator().clone(), omega_exact(&book).exponent() + 1)
            .add(&Dyadic::new(
                found_universal.kraft_lower().numerator().clone(),
                found_universal.kraft_lower().exponent() + 2,
            ));
        assert_eq!(report.kraft_lower(), expected);
    }
}
