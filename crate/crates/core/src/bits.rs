//! Finite binary strings.
//!
//! `BitString` is the universal payload of the crate: generated sequences,
//! contexts, phrases and code outputs are all bit strings. Bits are stored
//! one per byte (values 0 or 1), which keeps indexing and slicing trivial at
//! the scales this crate targets (a few hundred thousand bits).

use std::fmt;

use crate::error::Error;

/// A finite binary string over {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn with_capacity(cap: usize) -> Self {
        BitString {
            bits: Vec::with_capacity(cap),
        }
    }

    /// Builds from a slice of bit values. Panics if a value is not 0 or 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bit values must be 0 or 1");
        BitString {
            bits: bits.to_vec(),
        }
    }

    /// Parses an ASCII string of '0' and '1' characters.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => {
                    return Err(Error::Domain(format!(
                        "invalid character {other:?} at position {i}: expected '0' or '1'"
                    )))
                }
            }
        }
        Ok(BitString { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Inclusive range `x[i..j]`; `j < i` yields the empty string.
    pub fn range(&self, i: usize, j: isize) -> BitString {
        if j < i as isize {
            return BitString::new();
        }
        let j = j as usize;
        BitString::from_bits(&self.bits[i..=j])
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn repeat(&self, times: usize) -> BitString {
        BitString {
            bits: self.bits.repeat(times),
        }
    }

    /// The suffix consisting of the last `n` bits. Panics if `n > len`.
    pub fn suffix(&self, n: usize) -> BitString {
        BitString::from_bits(&self.bits[self.len() - n..])
    }

    /// First `n` bits.
    pub fn prefix(&self, n: usize) -> BitString {
        BitString::from_bits(&self.bits[..n])
    }

    /// ASCII rendering, one '0'/'1' per bit, no separators.
    pub fn to_ascii(&self) -> String {
        self.bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
    }

    /// Packs bits MSB-first into bytes, zero-padding the final byte.
    pub fn pack_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; (self.len() + 7) / 8];
        for (i, &b) in self.bits.iter().enumerate() {
            if b == 1 {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Inverse of [`pack_msb`](Self::pack_msb) given the exact bit count.
    pub fn unpack_msb(bytes: &[u8], bit_count: usize) -> Result<Self, Error> {
        if bit_count > bytes.len() * 8 {
            return Err(Error::Corrupt(format!(
                "declared {bit_count} bits but only {} bytes present",
                bytes.len()
            )));
        }
        let mut bits = Vec::with_capacity(bit_count);
        for i in 0..bit_count {
            bits.push((bytes[i / 8] >> (7 - i % 8)) & 1);
        }
        Ok(BitString { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            // Empty-string marker used by the table renderings as well.
            f.write_str("λ")
        } else {
            f.write_str(&self.to_ascii())
        }
    }
}

impl FromIterator<u8> for BitString {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        let bits: Vec<u8> = iter.into_iter().collect();
        BitString::from_bits(&bits)
    }
}
