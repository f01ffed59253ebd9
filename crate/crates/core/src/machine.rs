//! The self-delimiting machine model and its budgeted interpreter.
//!
//! A machine never sees its input as a whole: it asks for one bit at a time,
//! and a string is in the domain only if the machine halts having consumed
//! exactly that string. Domains are therefore prefix-free by construction.
//!
//! Step accounting: every executed action (write, read request, output
//! emission, halt) costs exactly one step. Budgets count steps, never wall
//! time, so all results are reproducible.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitString;

/// What a suspended run did on its latest step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepEvent {
    /// An internal action ran; the machine can step again.
    Ran,
    /// A read request executed; the run needs [`MachineRun::feed`] before the
    /// next step.
    NeedsBit,
    /// The halt action executed; the output is final.
    Halted,
}

/// A resumable, clonable execution of a machine. Cloning forks the run,
/// which is how domain exploration walks the tree of read answers.
pub trait MachineRun: Clone {
    /// Execute one action. Each call costs one step of budget.
    fn step(&mut self) -> StepEvent;

    /// Answer the read request of a preceding [`StepEvent::NeedsBit`].
    fn feed(&mut self, bit: bool);

    /// The bits emitted so far (final once `Halted` is returned).
    fn output(&self) -> BitString;
}

/// A self-delimiting machine: anything that can spawn a fresh run.
pub trait Machine {
    type Run: MachineRun;

    fn spawn(&self) -> Self::Run;
}

/// Outcome of a budgeted run on a concrete input string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunResult {
    /// The machine halted. `x` is in the domain only when `consumed`
    /// equals the length of `x`.
    Halted { output: BitString, consumed: usize },
    /// The step budget ran out first.
    OutOfBudget { consumed: usize },
    /// A read executed after all provided bits were already consumed.
    InputExhausted { consumed: usize },
}

impl RunResult {
    pub fn consumed(&self) -> usize {
        match self {
            RunResult::Halted { consumed, .. }
            | RunResult::OutOfBudget { consumed }
            | RunResult::InputExhausted { consumed } => *consumed,
        }
    }

    /// The halting output, when the run halted having consumed exactly
    /// `input_len` bits (i.e. the input is a domain element).
    pub fn domain_output(&self, input_len: usize) -> Option<&BitString> {
        match self {
            RunResult::Halted { output, consumed } if *consumed == input_len => Some(output),
            _ => None,
        }
    }
}

/// Run `m` on `x` for at most `budget` steps.
///
/// Deterministic in its arguments; raising the budget never changes a
/// `Halted` or `InputExhausted` result already reached at a lower budget.
pub fn run_machine<M: Machine>(m: &M, x: &BitString, budget: u64) -> RunResult {
    let mut run = m.spawn();
    let mut consumed = 0usize;
    let mut steps = 0u64;
    while steps < budget {
        steps += 1;
        match run.step() {
            StepEvent::Ran => {}
            StepEvent::NeedsBit => {
                if consumed < x.len() {
                    run.feed(x.bit(consumed));
                    consumed += 1;
                } else {
                    return RunResult::InputExhausted { consumed };
                }
            }
            StepEvent::Halted => {
                return RunResult::Halted {
                    output: run.output(),
                    consumed,
                };
            }
        }
    }
    RunResult::OutOfBudget { consumed }
}

// ---------------------------------------------------------------------------
// Transition-table machines
// ---------------------------------------------------------------------------

/// A work-tape symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeSym {
    Zero,
    One,
    Blank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
}

pub type State = u32;

/// One entry of the transition table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    /// Write a symbol, move the head, change state.
    Write { sym: TapeSym, mv: Move, next: State },
    /// Request an input bit and branch on it. No tape effect.
    ReadBit { on_zero: State, on_one: State },
    /// Emit one output bit and change state. No tape effect.
    OutputBit { bit: bool, next: State },
    /// Stop; the output so far is the result.
    Halt,
}

impl Action {
    fn states(&self) -> impl Iterator<Item = State> {
        let pair = match *self {
            Action::Write { next, .. } => [Some(next), None],
            Action::ReadBit { on_zero, on_one } => [Some(on_zero), Some(on_one)],
            Action::OutputBit { next, .. } => [Some(next), None],
            Action::Halt => [None, None],
        };
        pair.into_iter().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    NoStates,
    BadTarget { state: State },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::NoStates => write!(f, "a table machine needs at least one state"),
            TableError::BadTarget { state } => {
                write!(f, "transition targets nonexistent state {state}")
            }
        }
    }
}

/// A deterministic machine given by a total transition table over a single
/// bidirectional work tape. The tape starts all-blank with the head at cell
/// 0; state 0 is initial.
///
/// Rows are indexed by state; each row holds the actions for the symbols
/// 0, 1, B in that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableMachine {
    rows: Vec<[Action; 3]>,
}

impl TableMachine {
    pub fn new(rows: Vec<[Action; 3]>) -> Result<Self, TableError> {
        if rows.is_empty() {
            return Err(TableError::NoStates);
        }
        let count = rows.len() as State;
        for row in &rows {
            for action in row {
                for s in action.states() {
                    if s >= count {
                        return Err(TableError::BadTarget { state: s });
                    }
                }
            }
        }
        Ok(TableMachine { rows })
    }

    pub fn state_count(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn action(&self, state: State, sym: TapeSym) -> Action {
        self.rows[state as usize][sym_index(sym)]
    }

    pub fn rows(&self) -> &[[Action; 3]] {
        &self.rows
    }
}

pub(crate) fn sym_index(sym: TapeSym) -> usize {
    match sym {
        TapeSym::Zero => 0,
        TapeSym::One => 1,
        TapeSym::Blank => 2,
    }
}

/// Unbounded blank-filled tape, growable in both directions.
#[derive(Debug, Clone, Default)]
struct Tape {
    right: Vec<TapeSym>, // cells 0, 1, 2, ...
    left: Vec<TapeSym>,  // cells -1, -2, ...
    pos: i64,
}

impl Tape {
    fn read(&self) -> TapeSym {
        let cell = if self.pos >= 0 {
            self.right.get(self.pos as usize)
        } else {
            self.left.get((-self.pos - 1) as usize)
        };
        cell.copied().unwrap_or(TapeSym::Blank)
    }

    fn write(&mut self, sym: TapeSym) {
        let (vec, idx) = if self.pos >= 0 {
            (&mut self.right, self.pos as usize)
        } else {
            (&mut self.left, (-self.pos - 1) as usize)
        };
        if idx >= vec.len() {
            vec.resize(idx + 1, TapeSym::Blank);
        }
        vec[idx] = sym;
    }

    fn shift(&mut self, mv: Move) {
        match mv {
            Move::Left => self.pos -= 1,
            Move::Right => self.pos += 1,
        }
    }
}

#[derive(Clone)]
pub struct TableRun {
    table: Rc<TableMachine>,
    state: State,
    tape: Tape,
    pending: Option<(State, State)>,
    output: BitString,
    halted: bool,
}

impl Machine for TableMachine {
    type Run = TableRun;

    fn spawn(&self) -> TableRun {
        TableRun {
            table: Rc::new(self.clone()),
            state: 0,
            tape: Tape::default(),
            pending: None,
            output: BitString::new(),
            halted: false,
        }
    }
}

impl MachineRun for TableRun {
    fn step(&mut self) -> StepEvent {
        debug_assert!(self.pending.is_none(), "step while awaiting a bit");
        if self.halted {
            return StepEvent::Halted;
        }
        match self.table.action(self.state, self.tape.read()) {
            Action::Write { sym, mv, next } => {
                self.tape.write(sym);
                self.tape.shift(mv);
                self.state = next;
                StepEvent::Ran
            }
            Action::ReadBit { on_zero, on_one } => {
                self.pending = Some((on_zero, on_one));
                StepEvent::NeedsBit
            }
            Action::OutputBit { bit, next } => {
                self.output.push(bit);
                self.state = next;
                StepEvent::Ran
            }
            Action::Halt => {
                self.halted = true;
                StepEvent::Halted
            }
        }
    }

    fn feed(&mut self, bit: bool) {
        let (on_zero, on_one) = self.pending.take().expect("feed without a read request");
        self.state = if bit { on_one } else { on_zero };
    }

    fn output(&self) -> BitString {
        self.output.clone()
    }
}

// ---------------------------------------------------------------------------
// Codebook machines
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotPrefixFree {
    pub shorter: BitString,
    pub longer: BitString,
}

impl fmt::Display for NotPrefixFree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "codebook is not prefix-free: {} is a prefix of {}",
            self.shorter, self.longer
        )
    }
}

/// A machine whose domain is exactly an explicit finite prefix-free codebook.
///
/// On input it reads bits while the consumed string is a proper prefix of
/// some codeword; once the consumed string *is* a codeword it emits that
/// codeword's output and halts; once no codeword can extend the consumed
/// string it loops internally without reading any further bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodebookMachine {
    book: BTreeMap<BitString, BitString>,
}

impl CodebookMachine {
    pub fn new(book: BTreeMap<BitString, BitString>) -> Result<Self, NotPrefixFree> {
        let words: Vec<&BitString> = book.keys().collect();
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                if i != j && a.is_prefix_of(b) {
                    return Err(NotPrefixFree {
                        shorter: (*a).clone(),
                        longer: (*b).clone(),
                    });
                }
            }
        }
        Ok(CodebookMachine { book })
    }

    /// Codebook whose codewords all output ε.
    pub fn from_codewords<I>(words: I) -> Result<Self, NotPrefixFree>
    where
        I: IntoIterator<Item = BitString>,
    {
        Self::new(
            words
                .into_iter()
                .map(|w| (w, BitString::new()))
                .collect::<BTreeMap<_, _>>(),
        )
    }

    pub fn book(&self) -> &BTreeMap<BitString, BitString> {
        &self.book
    }

    pub fn codewords(&self) -> impl Iterator<Item = &BitString> + Clone {
        self.book.keys()
    }

    fn classify(&self, path: &BitString) -> PathClass {
        if let Some(out) = self.book.get(path) {
            return PathClass::Codeword(out.clone());
        }
        if self.book.keys().any(|w| path.is_prefix_of(w)) {
            PathClass::Viable
        } else {
            PathClass::Dead
        }
    }
}

enum PathClass {
    Codeword(BitString),
    Viable,
    Dead,
}

#[derive(Clone)]
pub struct CodebookRun {
    book: Rc<CodebookMachine>,
    path: BitString,
    emitting: Option<(BitString, usize)>,
    output: BitString,
    awaiting: bool,
    halted: bool,
}

impl Machine for CodebookMachine {
    type Run = CodebookRun;

    fn spawn(&self) -> CodebookRun {
        CodebookRun {
            book: Rc::new(self.clone()),
            path: BitString::new(),
            emitting: None,
            output: BitString::new(),
            awaiting: false,
            halted: false,
        }
    }
}

impl MachineRun for CodebookRun {
    fn step(&mut self) -> StepEvent {
        debug_assert!(!self.awaiting, "step while awaiting a bit");
        if self.halted {
            return StepEvent::Halted;
        }
        if let Some((out, idx)) = &mut self.emitting {
            if *idx < out.len() {
                let bit = out.bit(*idx);
                *idx += 1;
                self.output.push(bit);
                return StepEvent::Ran;
            }
            self.halted = true;
            return StepEvent::Halted;
        }
        match self.book.classify(&self.path) {
            PathClass::Codeword(out) => {
                if out.is_empty() {
                    self.halted = true;
                    StepEvent::Halted
                } else {
                    self.output.push(out.bit(0));
                    self.emitting = Some((out, 1));
                    StepEvent::Ran
                }
            }
            PathClass::Viable => {
                self.awaiting = true;
                StepEvent::NeedsBit
            }
            // No codeword can extend the consumed string: spin without
            // reading, so the branch stays unresolved at its current depth.
            PathClass::Dead => StepEvent::Ran,
        }
    }

    fn feed(&mut self, bit: bool) {
        debug_assert!(self.awaiting, "feed without a read request");
        self.awaiting = false;
        self.path.push(bit);
    }

    fn output(&self) -> BitString {
        self.output.clone()
    }
}

// ---------------------------------------------------------------------------
// The empty-domain machine
// ---------------------------------------------------------------------------

/// The machine with empty domain: it loops forever without ever requesting
/// a bit. Invalid table encodings decode to this machine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DivergeMachine;

#[derive(Clone)]
pub struct DivergeRun;

impl Machine for DivergeMachine {
    type Run = DivergeRun;

    fn spawn(&self) -> DivergeRun {
        DivergeRun
    }
}

impl MachineRun for DivergeRun {
    fn step(&mut self) -> StepEvent {
        StepEvent::Ran
    }

    fn feed(&mut self, _bit: bool) {
        unreachable!("the diverge machine never reads");
    }

    fn output(&self) -> BitString {
        BitString::new()
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::bits::bits;

    /// Reads one bit; on 0 halts with output ε, on 1 loops forever
    /// (a non-reading tape loop).
    pub fn halt0() -> TableMachine {
        let read = Action::ReadBit {
            on_zero: 1,
            on_one: 2,
        };
        let spin = Action::Write {
            sym: TapeSym::Blank,
            mv: Move::Right,
            next: 2,
        };
        TableMachine::new(alloc::vec![
            [read, read, read],
            [Action::Halt; 3],
            [spin, spin, spin],
        ])
        .unwrap()
    }

    /// Halts immediately without reading, after emitting `out`.
    pub fn emit_then_halt(out: &str) -> TableMachine {
        let out = bits(out);
        let n = out.len() as State;
        let mut rows: Vec<[Action; 3]> = out
            .iter()
            .enumerate()
            .map(|(i, bit)| {
                [Action::OutputBit {
                    bit,
                    next: i as State + 1,
                }; 3]
            })
            .collect();
        rows.push([Action::Halt; 3]);
        let _ = n;
        TableMachine::new(rows).unwrap()
    }

    /// The codebook {0, 10, 110}, all outputs ε.
    pub fn ladder_book() -> CodebookMachine {
        CodebookMachine::from_codewords([bits("0"), bits("10"), bits("110")]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use crate::bits::bits;

    #[test]
    fn halt0_on_zero_halts() {
        let m = halt0();
        let r = run_machine(&m, &bits("0"), 100);
        assert_eq!(
            r,
            RunResult::Halted {
                output: BitString::new(),
                consumed: 1
            }
        );
    }

    #[test]
    fn halt0_on_one_runs_out_of_budget() {
        let m = halt0();
        let r = run_machine(&m, &bits("1"), 100);
        assert_eq!(r, RunResult::OutOfBudget { consumed: 1 });
    }

    #[test]
    fn halt0_on_empty_input_exhausts() {
        let m = halt0();
        let r = run_machine(&m, &BitString::new(), 100);
        assert_eq!(r, RunResult::InputExhausted { consumed: 0 });
    }

    #[test]
    fn budget_is_monotone() {
        let m = halt0();
        // Halts at budget 2 (read + halt); the result must persist.
        let at2 = run_machine(&m, &bits("0"), 2);
        for budget in 2..40 {
            assert_eq!(run_machine(&m, &bits("0"), budget), at2);
        }
        assert_eq!(
            run_machine(&m, &bits("0"), 1),
            RunResult::OutOfBudget { consumed: 1 }
        );
    }

    #[test]
    fn runs_are_deterministic() {
        let m = emit_then_halt("0110");
        let a = run_machine(&m, &BitString::new(), 50);
        let b = run_machine(&m, &BitString::new(), 50);
        assert_eq!(a, b);
        assert_eq!(
            a,
            RunResult::Halted {
                output: bits("0110"),
                consumed: 0
            }
        );
    }

    #[test]
    fn consumed_counts_only_used_bits() {
        // Halting with unread input left over is reported with the smaller
        // consumed count; the full string is then not a domain element.
        let m = halt0();
        let r = run_machine(&m, &bits("01"), 100);
        assert_eq!(r.consumed(), 1);
        assert!(r.domain_output(2).is_none());
    }

    #[test]
    fn codebook_accepts_exactly_its_words() {
        let m = ladder_book();
        for (word, rest) in [("0", "10"), ("10", "110"), ("110", "0")] {
            let w = bits(word);
            let r = run_machine(&m, &w, 100);
            assert_eq!(r.domain_output(w.len()), Some(&BitString::new()));
            // A longer input halts early: prefix stays the domain element.
            let longer = w.concat(&bits(rest));
            assert_eq!(run_machine(&m, &longer, 100).consumed(), w.len());
        }
    }

    #[test]
    fn codebook_dead_path_spins_without_reading() {
        let m = ladder_book();
        let r = run_machine(&m, &bits("1110"), 100);
        // After reading 111 no codeword is reachable: the run keeps the
        // remaining bit unconsumed and burns budget.
        assert_eq!(r, RunResult::OutOfBudget { consumed: 3 });
    }

    #[test]
    fn codebook_outputs_are_emitted() {
        let mut book = BTreeMap::new();
        book.insert(bits("0"), bits("101"));
        book.insert(bits("1"), BitString::new());
        let m = CodebookMachine::new(book).unwrap();
        assert_eq!(
            run_machine(&m, &bits("0"), 100),
            RunResult::Halted {
                output: bits("101"),
                consumed: 1
            }
        );
        assert_eq!(
            run_machine(&m, &bits("1"), 100),
            RunResult::Halted {
                output: BitString::new(),
                consumed: 1
            }
        );
    }

    #[test]
    fn codebook_rejects_prefix_violations() {
        let err = CodebookMachine::from_codewords([bits("0"), bits("01")]).unwrap_err();
        assert_eq!(err.shorter, bits("0"));
        assert_eq!(err.longer, bits("01"));
    }

    #[test]
    fn empty_codeword_is_allowed_alone() {
        let m = CodebookMachine::from_codewords([BitString::new()]).unwrap();
        assert_eq!(
            run_machine(&m, &BitString::new(), 10),
            RunResult::Halted {
                output: BitString::new(),
                consumed: 0
            }
        );
    }

    #[test]
    fn diverge_machine_never_reads_or_halts() {
        let r = run_machine(&DivergeMachine, &bits("0101"), 1000);
        assert_eq!(r, RunResult::OutOfBudget { consumed: 0 });
    }

    #[test]
    fn table_machine_validates_targets() {
        let bad = TableMachine::new(alloc::vec![[Action::ReadBit {
            on_zero: 0,
            on_one: 7
        }; 3]]);
        assert_eq!(bad.unwrap_err(), TableError::BadTarget { state: 7 });
        assert_eq!(
            TableMachine::new(alloc::vec![]).unwrap_err(),
            TableError::NoStates
        );
    }

    #[test]
    fn tape_moves_and_writes() {
        // Write a 1, bounce left over it, and branch on what is read back.
        let m = TableMachine::new(alloc::vec![
            [Action::Write {
                sym: TapeSym::One,
                mv: Move::Left,
                next: 1
            }; 3],
            [Action::Write {
                sym: TapeSym::Zero,
                mv: Move::Right,
                next: 2
            }; 3],
            [
                // Back on the 1 written at cell 0.
                Action::Halt,
                Action::OutputBit { bit: true, next: 3 },
                Action::Halt,
            ],
            [Action::Halt; 3],
        ])
        .unwrap();
        assert_eq!(
            run_machine(&m, &BitString::new(), 10),
            RunResult::Halted {
                output: bits("1"),
                consumed: 0
            }
        );
    }
}
