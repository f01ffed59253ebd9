//! Text formats: machine files, codebook files, bit-string and dyadic
//! literals, and the s-expression syntax for primitive recursive terms.
//!
//! A machine file is one of:
//!
//! * transition-table lines `state sym -> write b move D goto s`,
//!   `state sym -> read s0 s1`, `state sym -> emit b goto s`,
//!   `state sym -> halt`, with sym in {0,1,B} and D in {L,R}; states are
//!   decimal naturals starting at 0 (state 0 initial); pairs not listed
//!   default to `halt`;
//! * codebook lines `codeword -> output`;
//! * the single keyword `universal`, `print` or `diverge`;
//! * `gate <s-expression>` for a range-gated universal machine;
//! * the keyword `spliced` followed by codebook lines.
//!
//! `#` starts a comment. Bit strings are ASCII 0/1 with `-` for the empty
//! string.

use std::collections::BTreeMap;

use chaitin_core::bits::BitString;
use chaitin_core::dyadic::Dyadic;
use chaitin_core::enumeration::{PrintMachine, Universal};
use chaitin_core::forge::SplicedMachine;
use chaitin_core::gate::{build_gated, GatedMachine};
use chaitin_core::machine::{
    Action, CodebookMachine, DivergeMachine, Machine, MachineRun, Move, StepEvent, TableMachine,
    TapeSym,
};
use chaitin_core::pr::PrTerm;
use chaitin_core::BigUint;

/// Any machine the command line can name.
#[derive(Debug, Clone)]
pub enum AnyMachine {
    Table(TableMachine),
    Codebook(CodebookMachine),
    Universal(Universal),
    Print(PrintMachine),
    Diverge(DivergeMachine),
    Gated(GatedMachine),
    Spliced(SplicedMachine),
}

#[derive(Clone)]
pub enum AnyRun {
    Table(<TableMachine as Machine>::Run),
    Codebook(<CodebookMachine as Machine>::Run),
    Universal(<Universal as Machine>::Run),
    Print(<PrintMachine as Machine>::Run),
    Diverge(<DivergeMachine as Machine>::Run),
    Gated(<GatedMachine as Machine>::Run),
    Spliced(<SplicedMachine as Machine>::Run),
}

impl Machine for AnyMachine {
    type Run = AnyRun;

    fn spawn(&self) -> AnyRun {
        match self {
            AnyMachine::Table(m) => AnyRun::Table(m.spawn()),
            AnyMachine::Codebook(m) => AnyRun::Codebook(m.spawn()),
            AnyMachine::Universal(m) => AnyRun::Universal(m.spawn()),
            AnyMachine::Print(m) => AnyRun::Print(m.spawn()),
            AnyMachine::Diverge(m) => AnyRun::Diverge(m.spawn()),
            AnyMachine::Gated(m) => AnyRun::Gated(m.spawn()),
            AnyMachine::Spliced(m) => AnyRun::Spliced(m.spawn()),
        }
    }
}

impl MachineRun for AnyRun {
    fn step(&mut self) -> StepEvent {
        match self {
            AnyRun::Table(r) => r.step(),
            AnyRun::Codebook(r) => r.step(),
            AnyRun::Universal(r) => r.step(),
            AnyRun::Print(r) => r.step(),
            AnyRun::Diverge(r) => r.step(),
            AnyRun::Gated(r) => r.step(),
            AnyRun::Spliced(r) => r.step(),
        }
    }

    fn feed(&mut self, bit: bool) {
        match self {
            AnyRun::Table(r) => r.feed(bit),
            AnyRun::Codebook(r) => r.feed(bit),
            AnyRun::Universal(r) => r.feed(bit),
            AnyRun::Print(r) => r.feed(bit),
            AnyRun::Diverge(r) => r.feed(bit),
            AnyRun::Gated(r) => r.feed(bit),
            AnyRun::Spliced(r) => r.feed(bit),
        }
    }

    fn output(&self) -> BitString {
        match self {
            AnyRun::Table(r) => r.output(),
            AnyRun::Codebook(r) => r.output(),
            AnyRun::Universal(r) => r.output(),
            AnyRun::Print(r) => r.output(),
            AnyRun::Diverge(r) => r.output(),
            AnyRun::Gated(r) => r.output(),
            AnyRun::Spliced(r) => r.output(),
        }
    }
}

// ---------------------------------------------------------------------------
// Literals
// ---------------------------------------------------------------------------

/// Bit-string literal: ASCII 0/1, with `-` for ε.
pub fn parse_bits(s: &str) -> Result<BitString, String> {
    if s == "-" {
        return Ok(BitString::new());
    }
    s.parse().map_err(|e| format!("bad bit string {s:?}: {e}"))
}

/// Render a bit string, ε as `-`.
pub fn render_bits(b: &BitString) -> String {
    if b.is_empty() {
        "-".to_string()
    } else {
        b.to_string()
    }
}

/// Dyadic literal: `num/2^k`, `num/den` with a power-of-two denominator, or
/// a binary expansion `0.b1b2...`; plain `0` and `1` are accepted too.
pub fn parse_dyadic(s: &str) -> Result<Dyadic, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(Dyadic::zero());
    }
    if s == "1" {
        return Ok(Dyadic::one());
    }
    if let Some(rest) = s.strip_prefix("0.") {
        let bits = parse_bits(rest)?;
        return Ok(Dyadic::new(bits.as_numeral(), bits.len() as u64));
    }
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| format!("bad dyadic literal {s:?}: expected num/2^k or 0.bits"))?;
    let num: BigUint = num
        .parse()
        .map_err(|_| format!("bad numerator in {s:?}"))?;
    let exp = if let Some(k) = den.strip_prefix("2^") {
        k.parse::<u64>().map_err(|_| format!("bad exponent in {s:?}"))?
    } else {
        let den: BigUint = den
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        let bits = den.bits();
        if bits == 0 || den != BigUint::from(1u8) << (bits - 1) {
            return Err(format!(
                "denominator of {s:?} is not a power of two; only dyadic rationals are representable"
            ));
        }
        bits - 1
    };
    Ok(Dyadic::new(num, exp))
}

// ---------------------------------------------------------------------------
// Machine files
// ---------------------------------------------------------------------------

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Raw codebook entries, without the prefix-freeness check (kraft-check
/// wants to see bad books too).
pub fn parse_codebook_entries(text: &str) -> Result<Vec<(BitString, BitString)>, String> {
    meaningful_lines(text)
        .map(|(no, line)| parse_codebook_line(line).map_err(|e| format!("line {no}: {e}")))
        .collect()
}

fn parse_codebook_line(line: &str) -> Result<(BitString, BitString), String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    match tokens.as_slice() {
        [word, "->", out] => Ok((parse_bits(word)?, parse_bits(out)?)),
        _ => Err(format!("expected `codeword -> output`, got {line:?}")),
    }
}

pub fn parse_machine(text: &str) -> Result<AnyMachine, String> {
    let mut lines = meaningful_lines(text);
    let (first_no, first) = lines
        .next()
        .ok_or_else(|| "empty machine file".to_string())?;
    let tokens: Vec<&str> = first.split_whitespace().collect();

    match tokens.as_slice() {
        ["universal"] => {
            ensure_no_more(lines)?;
            Ok(AnyMachine::Universal(Universal))
        }
        ["print"] => {
            ensure_no_more(lines)?;
            Ok(AnyMachine::Print(PrintMachine))
        }
        ["diverge"] => {
            ensure_no_more(lines)?;
            Ok(AnyMachine::Diverge(DivergeMachine))
        }
        ["gate", ..] => {
            ensure_no_more(lines)?;
            let expr = first.strip_prefix("gate").unwrap().trim();
            let term = parse_pr_term(expr)?;
            build_gated(term)
                .map(AnyMachine::Gated)
                .map_err(|e| format!("line {first_no}: {e}"))
        }
        ["spliced"] => {
            let mut book = BTreeMap::new();
            for (no, line) in lines {
                let (w, out) = parse_codebook_line(line).map_err(|e| format!("line {no}: {e}"))?;
                if book.insert(w.clone(), out).is_some() {
                    return Err(format!("line {no}: duplicate codeword {w}"));
                }
            }
            let book = CodebookMachine::new(book).map_err(|e| e.to_string())?;
            Ok(AnyMachine::Spliced(SplicedMachine { book }))
        }
        _ if tokens.len() >= 3 && tokens[2] == "->" => {
            let mut table_lines = vec![(first_no, first)];
            table_lines.extend(lines);
            parse_table_lines(&table_lines).map(AnyMachine::Table)
        }
        _ => {
            let mut book = BTreeMap::new();
            let all = core::iter::once((first_no, first)).chain(lines);
            for (no, line) in all {
                let (w, out) = parse_codebook_line(line).map_err(|e| format!("line {no}: {e}"))?;
                if book.insert(w.clone(), out).is_some() {
                    return Err(format!("line {no}: duplicate codeword {w}"));
                }
            }
            let book = CodebookMachine::new(book).map_err(|e| e.to_string())?;
            Ok(AnyMachine::Codebook(book))
        }
    }
}

fn ensure_no_more<'a, I>(mut lines: I) -> Result<(), String>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    match lines.next() {
        None => Ok(()),
        Some((no, _)) => Err(format!("line {no}: unexpected content after the keyword")),
    }
}

fn parse_sym(tok: &str) -> Result<TapeSym, String> {
    match tok {
        "0" => Ok(TapeSym::Zero),
        "1" => Ok(TapeSym::One),
        "B" => Ok(TapeSym::Blank),
        _ => Err(format!("bad tape symbol {tok:?} (want 0, 1 or B)")),
    }
}

fn parse_state(tok: &str) -> Result<u32, String> {
    tok.parse().map_err(|_| format!("bad state {tok:?}"))
}

fn parse_table_lines(lines: &[(usize, &str)]) -> Result<TableMachine, String> {
    let mut entries: BTreeMap<(u32, TapeSym), Action> = BTreeMap::new();
    let mut max_state = 0u32;
    let seen = |s: u32, max_state: &mut u32| *max_state = (*max_state).max(s);

    for &(no, line) in lines {
        let err = |msg: String| format!("line {no}: {msg}");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 4 || tokens[2] != "->" {
            return Err(err(format!("expected `state sym -> action`, got {line:?}")));
        }
        let state = parse_state(tokens[0]).map_err(err)?;
        let sym = parse_sym(tokens[1]).map_err(err)?;
        seen(state, &mut max_state);
        let action = match &tokens[3..] {
            ["write", b, "move", d, "goto", s] => {
                let mv = match *d {
                    "L" => Move::Left,
                    "R" => Move::Right,
                    _ => return Err(err(format!("bad move {d:?} (want L or R)"))),
                };
                let next = parse_state(s).map_err(err)?;
                seen(next, &mut max_state);
                Action::Write {
                    sym: parse_sym(b).map_err(err)?,
                    mv,
                    next,
                }
            }
            ["read", s0, s1] => {
                let on_zero = parse_state(s0).map_err(err)?;
                let on_one = parse_state(s1).map_err(err)?;
                seen(on_zero, &mut max_state);
                seen(on_one, &mut max_state);
                Action::ReadBit { on_zero, on_one }
            }
            ["emit", b, "goto", s] => {
                let bit = match *b {
                    "0" => false,
                    "1" => true,
                    _ => return Err(err(format!("bad output bit {b:?}"))),
                };
                let next = parse_state(s).map_err(err)?;
                seen(next, &mut max_state);
                Action::OutputBit { bit, next }
            }
            ["halt"] => Action::Halt,
            _ => return Err(err(format!("unknown action in {line:?}"))),
        };
        if entries.insert((state, sym), action).is_some() {
            return Err(err(format!(
                "duplicate transition for state {state} symbol {}",
                render_sym(sym)
            )));
        }
    }

    let rows: Vec<[Action; 3]> = (0..=max_state)
        .map(|s| {
            [TapeSym::Zero, TapeSym::One, TapeSym::Blank].map(|sym| {
                entries
                    .get(&(s, sym))
                    .copied()
                    .unwrap_or(Action::Halt)
            })
        })
        .collect();
    TableMachine::new(rows).map_err(|e| e.to_string())
}

fn render_sym(sym: TapeSym) -> &'static str {
    match sym {
        TapeSym::Zero => "0",
        TapeSym::One => "1",
        TapeSym::Blank => "B",
    }
}

/// Render a table in the line format, every pair listed, states ascending,
/// symbols in the order 0, 1, B.
pub fn render_table(m: &TableMachine) -> String {
    let mut out = String::new();
    for (state, row) in m.rows().iter().enumerate() {
        for (sym, action) in [TapeSym::Zero, TapeSym::One, TapeSym::Blank]
            .into_iter()
            .zip(row)
        {
            let rhs = match *action {
                Action::Write { sym, mv, next } => format!(
                    "write {} move {} goto {next}",
                    render_sym(sym),
                    match mv {
                        Move::Left => "L",
                        Move::Right => "R",
                    }
                ),
                Action::ReadBit { on_zero, on_one } => format!("read {on_zero} {on_one}"),
                Action::OutputBit { bit, next } => {
                    format!("emit {} goto {next}", if bit { "1" } else { "0" })
                }
                Action::Halt => "halt".to_string(),
            };
            out.push_str(&format!("{state} {} -> {rhs}\n", render_sym(sym)));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Primitive recursive term syntax
// ---------------------------------------------------------------------------

/// Parse an s-expression term: `(zero)`, `(succ)`, `(proj n i)`,
/// `(comp f g1 ... gk)`, `(primrec base step)`.
pub fn parse_pr_term(src: &str) -> Result<PrTerm, String> {
    let mut tokens = tokenize(src);
    tokens.reverse();
    let term = parse_sexpr(&mut tokens)?;
    if let Some(t) = tokens.pop() {
        return Err(format!("unexpected trailing token {t:?}"));
    }
    Ok(term)
}

fn tokenize(src: &str) -> Vec<String> {
    src.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn parse_sexpr(tokens: &mut Vec<String>) -> Result<PrTerm, String> {
    match tokens.pop().as_deref() {
        Some("(") => {}
        Some(t) => return Err(format!("expected `(`, got {t:?}")),
        None => return Err("unexpected end of term".to_string()),
    }
    let head = tokens
        .pop()
        .ok_or_else(|| "unexpected end of term".to_string())?;
    let term = match head.as_str() {
        "zero" => PrTerm::zero(),
        "succ" => PrTerm::succ(),
        "proj" => {
            let n = pop_number(tokens)?;
            let i = pop_number(tokens)?;
            PrTerm::proj(n, i).map_err(|e| e.to_string())?
        }
        "comp" => {
            let outer = parse_sexpr(tokens)?;
            let mut inner = Vec::new();
            while tokens.last().map(String::as_str) == Some("(") {
                inner.push(parse_sexpr(tokens)?);
            }
            PrTerm::comp(outer, inner).map_err(|e| e.to_string())?
        }
        "primrec" => {
            let base = parse_sexpr(tokens)?;
            let step = parse_sexpr(tokens)?;
            PrTerm::primrec(base, step).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown term head {other:?}")),
    };
    match tokens.pop().as_deref() {
        Some(")") => Ok(term),
        Some(t) => Err(format!("expected `)`, got {t:?}")),
        None => Err("unexpected end of term".to_string()),
    }
}

fn pop_number(tokens: &mut Vec<String>) -> Result<u32, String> {
    let t = tokens
        .pop()
        .ok_or_else(|| "unexpected end of term".to_string())?;
    t.parse().map_err(|_| format!("expected a number, got {t:?}"))
}

/// Canonical rendering, parseable by [`parse_pr_term`].
pub fn render_pr_term(t: &PrTerm) -> String {
    use chaitin_core::pr::TermView;
    match t.view() {
        TermView::Zero => "(zero)".to_string(),
        TermView::Succ => "(succ)".to_string(),
        TermView::Proj { arity, index } => format!("(proj {arity} {index})"),
        TermView::Comp { outer, inner } => {
            let mut s = format!("(comp {}", render_pr_term(outer));
            for g in inner {
                s.push(' ');
                s.push_str(&render_pr_term(g));
            }
            s.push(')');
            s
        }
        TermView::PrimRec { base, step } => {
            format!(
                "(primrec {} {})",
                render_pr_term(base),
                render_pr_term(step)
            )
        }
    }
}
