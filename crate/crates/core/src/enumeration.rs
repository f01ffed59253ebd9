//! The canonical effective enumeration of machines and the prefix-universal
//! machine built on top of it by header adjunction: running the universal
//! machine on `0^i 1 x` simulates machine number i on input x.
//!
//! # Index layout
//!
//! Index 0 is reserved for the PRINT machine (see below), so a uniform
//! prefix-complexity upper bound is available at the shortest header.
//!
//! For an index i >= 1, the payload is `nat_to_string(i - 1)` (the
//! length-lexicographic bijection), parsed as a packed transition table:
//!
//! * the state count S >= 1, as the self-delimiting header
//!   [`gamma::encode_nat`]`(S - 1)`;
//! * then S x 3 actions, row-major by state, inner order by symbol 0, 1, B;
//! * each action starts with a 2-bit opcode: `00` write, `01` read,
//!   `10` emit, `11` halt;
//!   * write: 2-bit symbol (`00` = 0, `01` = 1, `10` = B; `11` is invalid),
//!     1-bit move (`0` = L, `1` = R), then a state field;
//!   * read: two state fields (target on 0, target on 1);
//!   * emit: 1 output bit, then a state field;
//!   * halt: nothing;
//! * a state field is exactly w bits, most significant first, where w is the
//!   bit width of S - 1 (zero bits when S = 1); values >= S are invalid.
//!
//! The payload must be consumed exactly: leftover or missing bits make the
//! pattern invalid. Every invalid pattern decodes to the machine with empty
//! domain, so decoding is total. Encodings of well-formed tables are unique,
//! so [`encode_machine`] inverts [`decode_machine`] on tables.
//!
//! # Step accounting of the universal machine
//!
//! Each header bit costs one step; after the terminating 1 of the header,
//! every action of the decoded machine costs exactly one host step (overhead
//! factor 1). If machine i halts on x within b steps, the universal machine
//! halts on `0^i 1 x` within b + i + 1 steps.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::{nat_to_string, string_to_nat, BitString};
use crate::gamma::{self, GammaDecoder};
use crate::machine::{
    run_machine, Action, DivergeMachine, DivergeRun, Machine, MachineRun, Move, RunResult, State,
    StepEvent, TableMachine, TableRun, TapeSym,
};

/// Position of a machine in the canonical enumeration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MachineIndex(pub BigUint);

impl MachineIndex {
    pub fn from_u64(i: u64) -> Self {
        MachineIndex(BigUint::from(i))
    }
}

impl From<u64> for MachineIndex {
    fn from(i: u64) -> Self {
        MachineIndex::from_u64(i)
    }
}

impl fmt::Display for MachineIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for MachineIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MachineIndex({})", self.0)
    }
}

/// What an index decodes to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodedMachine {
    Print(PrintMachine),
    Table(TableMachine),
    Diverge(DivergeMachine),
}

#[derive(Clone)]
pub enum DecodedRun {
    Print(PrintRun),
    Table(TableRun),
    Diverge(DivergeRun),
}

impl Machine for DecodedMachine {
    type Run = DecodedRun;

    fn spawn(&self) -> DecodedRun {
        match self {
            DecodedMachine::Print(m) => DecodedRun::Print(m.spawn()),
            DecodedMachine::Table(m) => DecodedRun::Table(m.spawn()),
            DecodedMachine::Diverge(m) => DecodedRun::Diverge(m.spawn()),
        }
    }
}

impl MachineRun for DecodedRun {
    fn step(&mut self) -> StepEvent {
        match self {
            DecodedRun::Print(r) => r.step(),
            DecodedRun::Table(r) => r.step(),
            DecodedRun::Diverge(r) => r.step(),
        }
    }

    fn feed(&mut self, bit: bool) {
        match self {
            DecodedRun::Print(r) => r.feed(bit),
            DecodedRun::Table(r) => r.feed(bit),
            DecodedRun::Diverge(r) => r.feed(bit),
        }
    }

    fn output(&self) -> BitString {
        match self {
            DecodedRun::Print(r) => r.output(),
            DecodedRun::Table(r) => r.output(),
            DecodedRun::Diverge(r) => r.output(),
        }
    }
}

/// Total decoding of the enumeration: 0 is PRINT, any other index is parsed
/// per the packed layout, and invalid patterns yield the empty-domain
/// machine.
pub fn decode_machine(i: &MachineIndex) -> DecodedMachine {
    if i.0.is_zero() {
        return DecodedMachine::Print(PrintMachine);
    }
    let payload = nat_to_string(&(&i.0 - 1u8));
    match parse_table(&payload) {
        Some(table) => DecodedMachine::Table(table),
        None => DecodedMachine::Diverge(DivergeMachine),
    }
}

/// The canonical index of a transition table; inverse of [`decode_machine`]
/// on tables.
pub fn encode_machine(m: &TableMachine) -> MachineIndex {
    let payload = table_payload(m);
    MachineIndex(string_to_nat(&payload) + 1u8)
}

/// The simulation constant of machine i under the universal machine: a
/// program for machine i grows by exactly i + 1 bits (the `0^i 1` header).
/// The witness map is [`u_encode`].
pub fn simulation_constant(i: &MachineIndex) -> BigUint {
    &i.0 + 1u8
}

/// Sufficient budget for the universal machine to replay a run of machine i
/// that took `inner_budget` steps: header bits plus one host step per
/// simulated action.
pub fn simulation_budget(i: u64, inner_budget: u64) -> u64 {
    inner_budget + i + 1
}

/// The universal program `0^i 1 x` for machine i on input x.
pub fn u_encode(i: &MachineIndex, x: &BitString) -> BitString {
    let zeros = usize::try_from(&i.0).expect("index too large to materialize a program");
    let mut p = BitString::zeros(zeros);
    p.push(true);
    for b in x.iter() {
        p.push(b);
    }
    p
}

/// Run the universal machine on program `p` for at most `budget` steps.
pub fn run_universal(p: &BitString, budget: u64) -> RunResult {
    run_machine(&Universal, p, budget)
}

// ---------------------------------------------------------------------------
// Payload packing
// ---------------------------------------------------------------------------

fn state_width(state_count: u32) -> u32 {
    32 - (state_count - 1).leading_zeros()
}

fn table_payload(m: &TableMachine) -> BitString {
    let s = m.state_count();
    let w = state_width(s);
    let mut out = gamma::encode_nat((s - 1) as u64);
    let push_state = |out: &mut BitString, st: State| {
        for i in (0..w).rev() {
            out.push(st >> i & 1 == 1);
        }
    };
    for row in m.rows() {
        for action in row {
            match *action {
                Action::Write { sym, mv, next } => {
                    out.push(false);
                    out.push(false);
                    let (a, b) = match sym {
                        TapeSym::Zero => (false, false),
                        TapeSym::One => (false, true),
                        TapeSym::Blank => (true, false),
                    };
                    out.push(a);
                    out.push(b);
                    out.push(matches!(mv, Move::Right));
                    push_state(&mut out, next);
                }
                Action::ReadBit { on_zero, on_one } => {
                    out.push(false);
                    out.push(true);
                    push_state(&mut out, on_zero);
                    push_state(&mut out, on_one);
                }
                Action::OutputBit { bit, next } => {
                    out.push(true);
                    out.push(false);
                    out.push(bit);
                    push_state(&mut out, next);
                }
                Action::Halt => {
                    out.push(true);
                    out.push(true);
                }
            }
        }
    }
    out
}

struct Cursor<'a> {
    payload: &'a BitString,
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self) -> Option<bool> {
        let b = (self.pos < self.payload.len()).then(|| self.payload.bit(self.pos))?;
        self.pos += 1;
        Some(b)
    }

    fn take_state(&mut self, width: u32, state_count: u32) -> Option<State> {
        let mut v: u64 = 0;
        for _ in 0..width {
            v = v << 1 | self.take()? as u64;
        }
        (v < state_count as u64).then_some(v as State)
    }
}

fn parse_table(payload: &BitString) -> Option<TableMachine> {
    let mut cur = Cursor { payload, pos: 0 };
    let mut gamma = GammaDecoder::new();
    let s_minus_1 = loop {
        if let Some(n) = gamma.push(cur.take()?) {
            break n;
        }
    };
    let state_count = u32::try_from(s_minus_1.checked_add(1)?).ok()?;
    // Each action takes at least 2 bits; refuse early rather than allocate.
    let min_bits = (state_count as u64).checked_mul(6)?;
    if min_bits > (payload.len() - cur.pos) as u64 {
        return None;
    }
    let w = state_width(state_count);
    let mut rows = Vec::with_capacity(state_count as usize);
    for _ in 0..state_count {
        let mut row = [Action::Halt; 3];
        for slot in &mut row {
            let opcode = (cur.take()?, cur.take()?);
            *slot = match opcode {
                (false, false) => {
                    let sym = match (cur.take()?, cur.take()?) {
                        (false, false) => TapeSym::Zero,
                        (false, true) => TapeSym::One,
                        (true, false) => TapeSym::Blank,
                        (true, true) => return None,
                    };
                    let mv = if cur.take()? { Move::Right } else { Move::Left };
                    let next = cur.take_state(w, state_count)?;
                    Action::Write { sym, mv, next }
                }
                (false, true) => Action::ReadBit {
                    on_zero: cur.take_state(w, state_count)?,
                    on_one: cur.take_state(w, state_count)?,
                },
                (true, false) => Action::OutputBit {
                    bit: cur.take()?,
                    next: cur.take_state(w, state_count)?,
                },
                (true, true) => Action::Halt,
            };
        }
        rows.push(row);
    }
    if cur.pos != payload.len() {
        return None;
    }
    TableMachine::new(rows).ok()
}

// ---------------------------------------------------------------------------
// The PRINT machine (reserved index 0)
// ---------------------------------------------------------------------------

/// Reads a [`gamma`] length header, then copies exactly that many input bits
/// to the output and halts. Its domain is the set of all headed payloads,
/// which gives the uniform upper bound |x| + 2 floor(log2(|x|+1)) + 2 on the
/// shortest universal program printing x.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrintMachine;

#[derive(Clone)]
pub struct PrintRun {
    phase: PrintPhase,
    output: BitString,
}

#[derive(Clone)]
enum PrintPhase {
    Header(GammaDecoder),
    /// Copying: `remaining` bits still to read; `pending` holds a bit that
    /// was read but not yet emitted.
    Copy {
        remaining: u64,
        pending: Option<bool>,
    },
}

impl Machine for PrintMachine {
    type Run = PrintRun;

    fn spawn(&self) -> PrintRun {
        PrintRun {
            phase: PrintPhase::Header(GammaDecoder::new()),
            output: BitString::new(),
        }
    }
}

impl MachineRun for PrintRun {
    fn step(&mut self) -> StepEvent {
        match &mut self.phase {
            PrintPhase::Header(_) => StepEvent::NeedsBit,
            PrintPhase::Copy { remaining, pending } => match pending.take() {
                Some(bit) => {
                    self.output.push(bit);
                    StepEvent::Ran
                }
                None => {
                    if *remaining == 0 {
                        StepEvent::Halted
                    } else {
                        StepEvent::NeedsBit
                    }
                }
            },
        }
    }

    fn feed(&mut self, bit: bool) {
        match &mut self.phase {
            PrintPhase::Header(dec) => {
                if let Some(n) = dec.push(bit) {
                    self.phase = PrintPhase::Copy {
                        remaining: n,
                        pending: None,
                    };
                }
            }
            PrintPhase::Copy { remaining, pending } => {
                debug_assert!(pending.is_none() && *remaining > 0);
                *pending = Some(bit);
                *remaining -= 1;
            }
        }
    }

    fn output(&self) -> BitString {
        self.output.clone()
    }
}

// ---------------------------------------------------------------------------
// The universal machine
// ---------------------------------------------------------------------------

/// The prefix-universal machine: consumes zeros until the first 1, decoding
/// the count as a machine index, then simulates that machine on the
/// remaining input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Universal;

#[derive(Clone)]
pub enum UniversalRun {
    Header { zeros: u64 },
    Body(DecodedRun),
}

impl Machine for Universal {
    type Run = UniversalRun;

    fn spawn(&self) -> UniversalRun {
        UniversalRun::Header { zeros: 0 }
    }
}

impl MachineRun for UniversalRun {
    fn step(&mut self) -> StepEvent {
        match self {
            UniversalRun::Header { .. } => StepEvent::NeedsBit,
            UniversalRun::Body(inner) => inner.step(),
        }
    }

    fn feed(&mut self, bit: bool) {
        match self {
            UniversalRun::Header { zeros } => {
                if bit {
                    let decoded = decode_machine(&MachineIndex::from_u64(*zeros));
                    *self = UniversalRun::Body(decoded.spawn());
                } else {
                    *zeros += 1;
                }
            }
            UniversalRun::Body(inner) => inner.feed(bit),
        }
    }

    fn output(&self) -> BitString {
        match self {
            UniversalRun::Header { .. } => BitString::new(),
            UniversalRun::Body(inner) => inner.output(),
        }
    }
}
