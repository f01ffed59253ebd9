//! Finite bit strings and the length-lexicographic bijection with the
//! naturals.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A finite string over {0,1}. `false` is the bit 0, `true` is the bit 1.
///
/// The derived equality and hash are positional; the order is shortlex
/// (shorter strings first, ties broken lexicographically), which matches the
/// enumeration order used by [`nat_to_string`].
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// The empty string ε.
    pub const fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        BitString {
            bits: bits.into_iter().collect(),
        }
    }

    /// i zeros followed by nothing.
    pub fn zeros(n: usize) -> Self {
        BitString {
            bits: alloc::vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// `self` extended by `bit`, leaving `self` untouched.
    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.bits.clone();
        bits.push(bit);
        BitString { bits }
    }

    pub fn concat(&self, tail: &BitString) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&tail.bits);
        BitString { bits }
    }

    /// True iff `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString {
            bits: self.bits[..len].to_vec(),
        }
    }

    /// The value of the bits read as a big-endian binary numeral (ε is 0).
    pub fn as_numeral(&self) -> BigUint {
        let mut v = BigUint::zero();
        for b in self.iter() {
            v <<= 1u8;
            if b {
                v += 1u8;
            }
        }
        v
    }
}

/// Length-lexicographic bijection from the naturals onto all bit strings:
/// 0 ↔ ε, 1 ↔ "0", 2 ↔ "1", 3 ↔ "00", ... (write n+1 in binary and drop the
/// leading 1).
pub fn nat_to_string(n: &BigUint) -> BitString {
    let m = n + 1u8;
    let digits = m.bits(); // position of the leading 1, plus one
    let mut bits = Vec::with_capacity(digits as usize - 1);
    for i in (0..digits - 1).rev() {
        bits.push(m.bit(i));
    }
    BitString { bits }
}

/// Inverse of [`nat_to_string`].
pub fn string_to_nat(s: &BitString) -> BigUint {
    let mut v = BigUint::one();
    for b in s.iter() {
        v <<= 1u8;
        if b {
            v += 1u8;
        }
    }
    v - 1u8
}

/// True iff no distinct members of `set` are in the prefix relation.
///
/// Quadratic; meant for the small finite sets that come out of domain
/// exploration and codebook construction.
pub fn check_prefix_free<'a, I>(set: I) -> bool
where
    I: IntoIterator<Item = &'a BitString>,
    I::IntoIter: Clone,
{
    let items = set.into_iter();
    for (i, a) in items.clone().enumerate() {
        for (j, b) in items.clone().enumerate() {
            if i != j && a.is_prefix_of(b) {
                return false;
            }
        }
    }
    true
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Parse error for bit-string literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseBitsError {
    pub offending: char,
}

impl fmt::Display for ParseBitsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid bit character {:?}", self.offending)
    }
}

impl FromStr for BitString {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(ParseBitsError { offending: other }),
            }
        }
        Ok(BitString { bits })
    }
}

/// Convenience for tests and fixtures: `bits("0110")`.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("literal must be over {0,1}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[test]
    fn empty_string_has_length_zero() {
        assert_eq!(BitString::new().len(), 0);
        assert!(BitString::new().is_empty());
    }

    #[test]
    fn prefix_relation() {
        assert!(bits("0").is_prefix_of(&bits("01")));
        assert!(bits("01").is_prefix_of(&bits("01")));
        assert!(!bits("01").is_prefix_of(&bits("0")));
        assert!(BitString::new().is_prefix_of(&bits("1")));
    }

    #[test]
    fn prefix_free_examples() {
        let a = [bits("0"), bits("10"), bits("110")];
        assert!(check_prefix_free(a.iter()));
        let b = [bits("0"), bits("01")];
        assert!(!check_prefix_free(b.iter()));
        let c = [BitString::new()];
        assert!(check_prefix_free(c.iter()));
        let d = [BitString::new(), bits("0")];
        assert!(!check_prefix_free(d.iter()));
    }

    #[test]
    fn shortlex_order() {
        let mut v = [bits("1"), bits("00"), BitString::new(), bits("0"), bits("11")];
        v.sort();
        let rendered: Vec<String> = v.iter().map(|s| alloc::format!("{s}")).collect();
        assert_eq!(rendered, ["", "0", "1", "00", "11"]);
    }

    #[test]
    fn bijection_small_values() {
        let expect = ["", "0", "1", "00", "01", "10", "11", "000"];
        for (n, s) in expect.iter().enumerate() {
            assert_eq!(nat_to_string(&BigUint::from(n)), bits(s));
        }
    }

    #[test]
    fn bijection_round_trip_exhaustive() {
        for n in 0u32..=1 << 16 {
            let n = BigUint::from(n);
            assert_eq!(string_to_nat(&nat_to_string(&n)), n);
        }
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(alloc::format!("{}", bits("0101")), "0101");
        assert!("01x".parse::<BitString>().is_err());
    }

    proptest! {
        #[test]
        fn shortlex_matches_nat_order(a in 0u64..4096, b in 0u64..4096) {
            let sa = nat_to_string(&BigUint::from(a));
            let sb = nat_to_string(&BigUint::from(b));
            prop_assert_eq!(a.cmp(&b), sa.cmp(&sb));
        }

        #[test]
        fn string_round_trip(v in proptest::collection::vec(any::<bool>(), 0..64)) {
            let s = BitString::from_bits(v.clone());
            let back = string_to_nat(&s);
            prop_assert_eq!(nat_to_string(&back), s);
        }
    }
}
