//! Exact nonnegative dyadic rationals: numerator / 2^exponent with an
//! arbitrary-precision numerator. All comparisons and arithmetic are exact.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::BitString;

/// A nonnegative dyadic rational in canonical form: the numerator is odd or
/// zero, and the exponent is 0 when the numerator is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            numerator: BigUint::from(1u8),
            exponent: 0,
        }
    }

    /// numerator / 2^exponent, reduced to canonical form.
    pub fn new(numerator: BigUint, exponent: u64) -> Self {
        let mut d = Dyadic {
            numerator,
            exponent,
        };
        d.canonicalize();
        d
    }

    /// 2^-n.
    pub fn pow2_neg(n: u64) -> Self {
        Dyadic {
            numerator: BigUint::from(1u8),
            exponent: n,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let shift = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = shift.min(self.exponent);
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    /// Both numerators brought to the common exponent max(e1, e2).
    fn aligned(&self, other: &Dyadic) -> (BigUint, BigUint, u64) {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        (a, b, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    /// Exact difference, or `None` when `other > self`.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let (a, b, e) = self.aligned(other);
        if b > a {
            return None;
        }
        Some(Dyadic::new(a - b, e))
    }

    /// floor(value * 2^n) as an integer.
    pub fn floor_shl(&self, n: u64) -> BigUint {
        if n >= self.exponent {
            &self.numerator << (n - self.exponent)
        } else {
            &self.numerator >> (self.exponent - n)
        }
    }

    /// The digits of the terminating binary expansion `0.b1 b2 ... b_e`,
    /// where e is the canonical exponent. The value must be at most 1; the
    /// values 0 and 1 both yield ε (1 has no expansion of the form `0.w`,
    /// and 0 is all zeros).
    pub fn terminating_bits(&self) -> BitString {
        if self.is_zero() {
            return BitString::new();
        }
        let mut out = BitString::new();
        for i in (0..self.exponent).rev() {
            out.push(self.numerator.bit(i));
        }
        out
    }

    /// The decomposition of the value into distinct powers 2^-n, most
    /// significant first. The value 1 contributes n = 0.
    pub fn power_decomposition(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let width = self.numerator.bits();
        for i in (0..width).rev() {
            if self.numerator.bit(i) {
                out.push(self.exponent - i);
            }
        }
        out
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical rendering `num/2^k`, e.g. `7/2^3`; 1 is `1/2^0`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact Σ 2^-|x| over the given strings.
pub fn kraft_sum<'a, I>(strings: I) -> Dyadic
where
    I: IntoIterator<Item = &'a BitString>,
{
    kraft_sum_lengths(strings.into_iter().map(|s| s.len() as u64))
}

/// Exact Σ 2^-n over the given lengths.
pub fn kraft_sum_lengths<I>(lengths: I) -> Dyadic
where
    I: IntoIterator<Item = u64>,
{
    let mut acc = Dyadic::zero();
    for n in lengths {
        acc = acc.add(&Dyadic::pow2_neg(n));
    }
    acc
}
