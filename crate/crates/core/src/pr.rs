//! Primitive recursive function terms: construction with arity checking,
//! evaluation over arbitrary-precision naturals, range counting, and a total
//! Godel coding of terms so that index-to-machine transformations are
//! genuinely computable.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A well-formed primitive recursive term. Arity consistency is enforced at
/// construction, so evaluation can only fail on a wrong argument count at
/// the top level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrTerm {
    node: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Zero,
    Succ,
    Proj { arity: u32, index: u32 },
    Comp { outer: Box<PrTerm>, inner: Vec<PrTerm> },
    PrimRec { base: Box<PrTerm>, step: Box<PrTerm> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrArityError {
    /// A projection needs 1 <= index <= arity and arity >= 1.
    BadProjection { arity: u32, index: u32 },
    /// Composition needs as many inner terms as the outer arity.
    CompCount { outer_arity: u32, inner_count: usize },
    /// All inner terms of a composition must agree on their arity.
    CompInnerArity { expected: u32, found: u32 },
    /// Recursion needs step arity = base arity + 2.
    PrimRecStep { base_arity: u32, step_arity: u32 },
    /// Evaluation was given the wrong number of arguments.
    WrongArgumentCount { expected: u32, got: usize },
}

impl fmt::Display for PrArityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrArityError::BadProjection { arity, index } => {
                write!(f, "projection index {index} out of range for arity {arity}")
            }
            PrArityError::CompCount {
                outer_arity,
                inner_count,
            } => write!(
                f,
                "composition needs {outer_arity} inner terms, got {inner_count}"
            ),
            PrArityError::CompInnerArity { expected, found } => {
                write!(f, "inner terms disagree on arity: {expected} vs {found}")
            }
            PrArityError::PrimRecStep {
                base_arity,
                step_arity,
            } => write!(
                f,
                "recursion step must have arity {}, got {step_arity}",
                base_arity + 2
            ),
            PrArityError::WrongArgumentCount { expected, got } => {
                write!(f, "term of arity {expected} applied to {got} arguments")
            }
        }
    }
}

impl PrTerm {
    /// The 0-ary constant 0.
    pub fn zero() -> Self {
        PrTerm { node: Node::Zero }
    }

    /// The unary successor.
    pub fn succ() -> Self {
        PrTerm { node: Node::Succ }
    }

    /// The i-th of n arguments (1-based).
    pub fn proj(arity: u32, index: u32) -> Result<Self, PrArityError> {
        if arity == 0 || index == 0 || index > arity {
            return Err(PrArityError::BadProjection { arity, index });
        }
        Ok(PrTerm {
            node: Node::Proj { arity, index },
        })
    }

    /// outer(inner_1(args), ..., inner_k(args)).
    pub fn comp(outer: PrTerm, inner: Vec<PrTerm>) -> Result<Self, PrArityError> {
        if outer.arity() as usize != inner.len() {
            return Err(PrArityError::CompCount {
                outer_arity: outer.arity(),
                inner_count: inner.len(),
            });
        }
        if let Some(first) = inner.first() {
            let expected = first.arity();
            for g in &inner {
                if g.arity() != expected {
                    return Err(PrArityError::CompInnerArity {
                        expected,
                        found: g.arity(),
                    });
                }
            }
        }
        Ok(PrTerm {
            node: Node::Comp {
                outer: Box::new(outer),
                inner,
            },
        })
    }

    /// Recursion on the last argument: f(xs, 0) = base(xs) and
    /// f(xs, y + 1) = step(xs, y, f(xs, y)).
    pub fn primrec(base: PrTerm, step: PrTerm) -> Result<Self, PrArityError> {
        if step.arity() != base.arity() + 2 {
            return Err(PrArityError::PrimRecStep {
                base_arity: base.arity(),
                step_arity: step.arity(),
            });
        }
        Ok(PrTerm {
            node: Node::PrimRec {
                base: Box::new(base),
                step: Box::new(step),
            },
        })
    }

    pub fn arity(&self) -> u32 {
        match &self.node {
            Node::Zero => 0,
            Node::Succ => 1,
            Node::Proj { arity, .. } => *arity,
            Node::Comp { inner, .. } => inner.first().map_or(0, PrTerm::arity),
            Node::PrimRec { base, .. } => base.arity() + 1,
        }
    }

    /// Borrowed view of the top node, for rendering and inspection.
    pub fn view(&self) -> TermView<'_> {
        match &self.node {
            Node::Zero => TermView::Zero,
            Node::Succ => TermView::Succ,
            Node::Proj { arity, index } => TermView::Proj {
                arity: *arity,
                index: *index,
            },
            Node::Comp { outer, inner } => TermView::Comp { outer, inner },
            Node::PrimRec { base, step } => TermView::PrimRec { base, step },
        }
    }

    pub fn eval(&self, args: &[BigUint]) -> Result<BigUint, PrArityError> {
        if args.len() != self.arity() as usize {
            return Err(PrArityError::WrongArgumentCount {
                expected: self.arity(),
                got: args.len(),
            });
        }
        Ok(self.eval_unchecked(args))
    }

    fn eval_unchecked(&self, args: &[BigUint]) -> BigUint {
        match &self.node {
            Node::Zero => BigUint::zero(),
            Node::Succ => &args[0] + 1u8,
            Node::Proj { index, .. } => args[*index as usize - 1].clone(),
            Node::Comp { outer, inner } => {
                let vals: Vec<BigUint> = inner.iter().map(|g| g.eval_unchecked(args)).collect();
                outer.eval_unchecked(&vals)
            }
            Node::PrimRec { base, step } => {
                let (head, last) = args.split_at(args.len() - 1);
                let bound = &last[0];
                let mut acc = base.eval_unchecked(head);
                let mut counter = BigUint::zero();
                let mut step_args: Vec<BigUint> = head.to_vec();
                step_args.push(BigUint::zero());
                step_args.push(BigUint::zero());
                while &counter < bound {
                    let k = step_args.len();
                    step_args[k - 2] = counter.clone();
                    step_args[k - 1] = acc;
                    acc = step.eval_unchecked(&step_args);
                    counter += 1u8;
                }
                acc
            }
        }
    }
}

/// Borrowed view of a term's top node; see [`PrTerm::view`].
#[derive(Debug, Clone, Copy)]
pub enum TermView<'a> {
    Zero,
    Succ,
    Proj { arity: u32, index: u32 },
    Comp { outer: &'a PrTerm, inner: &'a [PrTerm] },
    PrimRec { base: &'a PrTerm, step: &'a PrTerm },
}

/// Standard evaluation entry point.
pub fn eval_pr(t: &PrTerm, args: &[BigUint]) -> Result<BigUint, PrArityError> {
    t.eval(args)
}

/// Number of distinct values among t(1), ..., t(j) for a unary term.
pub fn range_count(t: &PrTerm, j: u64) -> Result<u64, PrArityError> {
    if t.arity() != 1 {
        return Err(PrArityError::WrongArgumentCount {
            expected: 1,
            got: t.arity() as usize,
        });
    }
    let mut counter = RangeCounter::new(Rc::new(t.clone()));
    let mut count = 0;
    for _ in 0..j {
        count = counter.probe();
    }
    Ok(count)
}

/// Incremental range counter over t(1), t(2), ...; one evaluation per probe.
#[derive(Debug, Clone)]
pub(crate) struct RangeCounter {
    term: Rc<PrTerm>,
    next: BigUint,
    seen: BTreeSet<BigUint>,
}

impl RangeCounter {
    pub(crate) fn new(term: Rc<PrTerm>) -> Self {
        debug_assert_eq!(term.arity(), 1);
        RangeCounter {
            term,
            next: BigUint::one(),
            seen: BTreeSet::new(),
        }
    }

    /// Evaluate at the next point and return the distinct count so far.
    pub(crate) fn probe(&mut self) -> u64 {
        let v = self
            .term
            .eval(core::slice::from_ref(&self.next))
            .expect("unary by construction");
        self.seen.insert(v);
        self.next += 1u8;
        self.seen.len() as u64
    }
}

// ---------------------------------------------------------------------------
// Godel coding
// ---------------------------------------------------------------------------

/// Cantor pairing.
fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u8)) / 2u8 + b
}

fn unpair(n: &BigUint) -> (BigUint, BigUint) {
    // Invert (s(s+1))/2 + b via an integer square root.
    let w = (&(n * 8u8) + 1u8).sqrt();
    let s = (&w - 1u8) / 2u8;
    let t = (&s * (&s + 1u8)) / 2u8;
    let b = n - t;
    let a = s - &b;
    (a, b)
}

fn encode_list(items: &[PrTerm]) -> BigUint {
    let mut code = BigUint::zero();
    for t in items.iter().rev() {
        code = pair(&term_to_index(t), &code) + 1u8;
    }
    code
}

/// Injective index of a term: tag in {0..4} plus a Cantor-paired payload.
pub fn term_to_index(t: &PrTerm) -> BigUint {
    let (tag, payload): (u8, BigUint) = match &t.node {
        Node::Zero => (0, BigUint::zero()),
        Node::Succ => (1, BigUint::zero()),
        Node::Proj { arity, index } => (
            2,
            pair(
                &BigUint::from(arity - 1),
                &BigUint::from(index - 1),
            ),
        ),
        Node::Comp { outer, inner } => (3, pair(&term_to_index(outer), &encode_list(inner))),
        Node::PrimRec { base, step } => (4, pair(&term_to_index(base), &term_to_index(step))),
    };
    payload * 5u8 + tag
}

/// Strict inverse of [`term_to_index`]: `None` when the code does not spell
/// a well-formed term.
pub fn term_from_index(n: &BigUint) -> Option<PrTerm> {
    let tag: u8 = (n % 5u8).try_into().ok()?;
    let payload = n / 5u8;
    match tag {
        0 => Some(PrTerm::zero()),
        1 => Some(PrTerm::succ()),
        2 => {
            let (a, b) = unpair(&payload);
            let arity = u32::try_from(a).ok()?.checked_add(1)?;
            let index = u32::try_from(b).ok()?.checked_add(1)?;
            PrTerm::proj(arity, index).ok()
        }
        3 => {
            let (f, rest) = unpair(&payload);
            let outer = term_from_index(&f)?;
            let mut inner = Vec::new();
            let mut cursor = rest;
            while !cursor.is_zero() {
                let (head, tail) = unpair(&(&cursor - 1u8));
                inner.push(term_from_index(&head)?);
                cursor = tail;
            }
            PrTerm::comp(outer, inner).ok()
        }
        4 => {
            let (b, s) = unpair(&payload);
            PrTerm::primrec(term_from_index(&b)?, term_from_index(&s)?).ok()
        }
        _ => unreachable!(),
    }
}

/// Total enumeration of unary terms: strict decode, then coercion to arity 1
/// (0-ary terms are lifted to constants, higher arities are diagonalized);
/// codes that do not decode fall back to the constant-zero function. Every
/// unary term appears, at its own canonical index.
pub fn unary_from_index(n: &BigUint) -> PrTerm {
    let t = match term_from_index(n) {
        Some(t) => t,
        None => return terms::zero1(),
    };
    match t.arity() {
        0 => PrTerm::primrec(t, PrTerm::proj(2, 2).unwrap()).unwrap(),
        1 => t,
        k => {
            let diag = alloc::vec![PrTerm::proj(1, 1).unwrap(); k as usize];
            PrTerm::comp(t, diag).unwrap()
        }
    }
}

/// A toolbox of textbook terms used by tests, gates and documentation.
pub mod terms {
    use super::PrTerm;

    /// Unary constant 0.
    pub fn zero1() -> PrTerm {
        PrTerm::primrec(PrTerm::zero(), PrTerm::proj(2, 2).unwrap()).unwrap()
    }

    /// Unary constant k.
    pub fn const_unary(k: u64) -> PrTerm {
        let mut t = zero1();
        for _ in 0..k {
            t = PrTerm::comp(PrTerm::succ(), alloc::vec![t]).unwrap();
        }
        t
    }

    /// The unary identity.
    pub fn identity() -> PrTerm {
        PrTerm::proj(1, 1).unwrap()
    }

    /// x - 1, truncated at 0.
    pub fn pred() -> PrTerm {
        PrTerm::primrec(PrTerm::zero(), PrTerm::proj(2, 1).unwrap()).unwrap()
    }

    /// Binary truncated subtraction x - y.
    pub fn monus() -> PrTerm {
        let step = PrTerm::comp(pred(), alloc::vec![PrTerm::proj(3, 3).unwrap()]).unwrap();
        PrTerm::primrec(PrTerm::proj(1, 1).unwrap(), step).unwrap()
    }

    /// Binary addition.
    pub fn add() -> PrTerm {
        let step = PrTerm::comp(PrTerm::succ(), alloc::vec![PrTerm::proj(3, 3).unwrap()]).unwrap();
        PrTerm::primrec(PrTerm::proj(1, 1).unwrap(), step).unwrap()
    }

    /// 1 - x truncated: maps 0 to 1 and everything else to 0.
    pub fn boolean_not() -> PrTerm {
        let one = PrTerm::comp(PrTerm::succ(), alloc::vec![PrTerm::zero()]).unwrap();
        let step = PrTerm::comp(zero1(), alloc::vec![PrTerm::proj(2, 1).unwrap()]).unwrap();
        PrTerm::primrec(one, step).unwrap()
    }

    /// x mod 2.
    pub fn parity() -> PrTerm {
        let step =
            PrTerm::comp(boolean_not(), alloc::vec![PrTerm::proj(2, 2).unwrap()]).unwrap();
        PrTerm::primrec(PrTerm::zero(), step).unwrap()
    }

    /// min(x - 1, c): over the positive integers its range is {0, ..., c},
    /// exactly c + 1 values.
    pub fn capped_shift(c: u64) -> PrTerm {
        // d - (d - c) where d = x - 1.
        let d = pred();
        let d_minus_c =
            PrTerm::comp(monus(), alloc::vec![pred(), const_unary(c)]).unwrap();
        PrTerm::comp(monus(), alloc::vec![d, d_minus_c]).unwrap()
    }
}
