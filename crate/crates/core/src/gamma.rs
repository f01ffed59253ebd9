//! Elias-gamma style self-delimiting header for naturals.
//!
//! Classic Elias gamma codes positive integers; the header here codes the
//! natural n as gamma(n + 1), so a length of zero is representable. The code
//! for n is z zeros, a one, then the z low bits of n + 1, where
//! z = floor(log2(n + 1)); its length is 2z + 1.

use crate::bits::BitString;

/// Encode the natural `n` as a self-delimiting header.
pub fn encode_nat(n: u64) -> BitString {
    let m = n + 1;
    let z = 63 - m.leading_zeros() as u64;
    let mut out = BitString::zeros(z as usize);
    out.push(true);
    for i in (0..z).rev() {
        out.push(m >> i & 1 == 1);
    }
    out
}

/// Length of [`encode_nat`]`(n)` without materializing it: 2 floor(log2(n+1)) + 1.
pub fn encoded_len(n: u64) -> u64 {
    let z = 63 - (n + 1).leading_zeros() as u64;
    2 * z + 1
}

/// Incremental decoder fed one bit at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaDecoder {
    /// Counting the unary prefix.
    Zeros { count: u64 },
    /// Reading the `remaining` explicit bits of n + 1 into `value`.
    Payload { value: u64, remaining: u64 },
    /// Finished; the decoded natural.
    Done(u64),
}

impl GammaDecoder {
    pub fn new() -> Self {
        GammaDecoder::Zeros { count: 0 }
    }

    /// Feed the next bit. Returns `Some(n)` when the header just completed.
    pub fn push(&mut self, bit: bool) -> Option<u64> {
        match *self {
            GammaDecoder::Zeros { count } => {
                if bit {
                    if count == 0 {
                        *self = GammaDecoder::Done(0);
                        return Some(0);
                    }
                    *self = GammaDecoder::Payload {
                        value: 1,
                        remaining: count,
                    };
                } else {
                    *self = GammaDecoder::Zeros { count: count + 1 };
                }
                None
            }
            GammaDecoder::Payload { value, remaining } => {
                // Values past u64::MAX saturate: a budgeted run can never
                // consume that many payload bits, so the difference is
                // unobservable.
                let value = value
                    .checked_mul(2)
                    .map(|v| v | bit as u64)
                    .unwrap_or(u64::MAX);
                if remaining == 1 {
                    *self = GammaDecoder::Done(value - 1);
                    Some(value - 1)
                } else {
                    *self = GammaDecoder::Payload {
                        value,
                        remaining: remaining - 1,
                    };
                    None
                }
            }
            GammaDecoder::Done(_) => panic!("push after the header completed"),
        }
    }
}

impl Default for GammaDecoder {
    fn default() -> Self {
        Self::new()
    }
}
