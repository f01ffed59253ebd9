//! Upper bounds on the prefix complexity induced by the universal machine,
//! and finite randomness-deficiency checks. Exact values are uncomputable;
//! everything here is an upper bound relative to an explicit search depth
//! and budget, and is reported as such.

use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitString;
use crate::enumeration::{run_universal, u_encode, MachineIndex};
use crate::explore::{explore_domain, DomainReport};
use crate::gamma;
use crate::machine::RunResult;

/// A program for the universal machine witnessing an upper bound on the
/// complexity of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityWitness {
    pub target: BitString,
    pub program: BitString,
    pub program_length: usize,
    /// The search was exhaustive over all programs up to this length...
    pub search_exhaustive_up_to: u64,
    /// ...at this per-program step budget. Shorter programs may exist beyond
    /// the budget; none exist within it.
    pub budget: u64,
}

impl ComplexityWitness {
    /// Replay the witness: the program must halt with exactly the target
    /// output, consuming all its bits, within the recorded budget.
    pub fn replays(&self) -> bool {
        match run_universal(&self.program, self.budget) {
            RunResult::Halted { output, consumed } => {
                output == self.target && consumed == self.program.len()
            }
            _ => false,
        }
    }
}

/// No program produced the target within the search bounds. Says the search
/// was too small, never that the target is incompressible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotFound {
    pub target: BitString,
    pub max_len: u64,
    pub budget: u64,
}

impl fmt::Display for NotFound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no program of length <= {} produced {} within {} steps",
            self.max_len,
            self.target,
            self.budget
        )
    }
}

/// The universal program that prints `x` through the reserved PRINT machine:
/// header `1`, a self-delimiting length header, then `x` verbatim. Its
/// length is |x| + 2 floor(log2(|x|+1)) + 2, the uniform upper bound on the
/// shortest program for x.
pub fn print_program(x: &BitString) -> BitString {
    let payload = gamma::encode_nat(x.len() as u64).concat(x);
    u_encode(&MachineIndex::from_u64(0), &payload)
}

/// Exhaustively search dom(U) for programs of length at most `max_len`
/// producing `x`, within `budget` steps each, and return the
/// lexicographically smallest among the shortest ones found.
pub fn h_upper(
    x: &BitString,
    max_len: u64,
    budget: u64,
) -> Result<ComplexityWitness, NotFound> {
    let report = explore_domain(&crate::enumeration::Universal, max_len, budget);
    h_upper_from_report(&report, x).ok_or_else(|| NotFound {
        target: x.clone(),
        max_len,
        budget,
    })
}

/// The same selection from an existing exploration of the universal machine,
/// so one exploration can answer many targets.
pub fn h_upper_from_report(report: &DomainReport, x: &BitString) -> Option<ComplexityWitness> {
    // Shortlex key order makes the first hit the shortest, lex-least program.
    let (program, _) = report.halting.iter().find(|(_, info)| &info.output == x)?;
    Some(ComplexityWitness {
        target: x.clone(),
        program: program.clone(),
        program_length: program.len(),
        search_exhaustive_up_to: report.max_depth,
        budget: report.node_budget,
    })
}

/// Verdict of a deficiency check at one prefix length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A program shorter than n - c producing the length-n prefix exists:
    /// the randomness claim at this c is refuted at this n, at any budget
    /// from this one up.
    Refuted(ComplexityWitness),
    /// Nothing shorter was found within the search bounds. Never upgrades
    /// to a randomness claim.
    UnrefutedAtBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyReport {
    pub n: u64,
    pub verdict: Verdict,
}

/// Check the claim "the complexity of every length-n prefix of alpha is at
/// least n - c" for all n up to `n_max`, by exhaustive search to `max_len`
/// at `budget`. Requires |alpha_bits| >= n_max.
pub fn deficiency_check(
    alpha_bits: &BitString,
    c: u64,
    n_max: u64,
    max_len: u64,
    budget: u64,
) -> Vec<DeficiencyReport> {
    let report = explore_domain(&crate::enumeration::Universal, max_len, budget);
    deficiency_from_report(&report, alpha_bits, c, n_max)
}

/// The same verdicts drawn from an existing exploration report.
pub fn deficiency_from_report(
    report: &DomainReport,
    alpha_bits: &BitString,
    c: u64,
    n_max: u64,
) -> Vec<DeficiencyReport> {
    assert!(
        alpha_bits.len() as u64 >= n_max,
        "need at least n_max digits of alpha"
    );
    (1..=n_max)
        .map(|n| {
            let prefix = alpha_bits.prefix(n as usize);
            let verdict = match h_upper_from_report(report, &prefix) {
                Some(w) if n > c && (w.program_length as u64) < n - c => Verdict::Refuted(w),
                _ => Verdict::UnrefutedAtBudget,
            };
            DeficiencyReport { n, verdict }
        })
        .collect()
}
