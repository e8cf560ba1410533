use std::fmt;
use std::ops::{BitXor, Index};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CodeError;
use crate::games::RandomStream;

/// Vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        BitVector { bits: vec![true; len] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitVector { bits }
    }

    /// Indicator vector of `indices` inside `[0, len)`.
    pub fn indicator(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.bits[i] = true;
        }
        v
    }

    /// `len` uniform bits, one draw per bit.
    pub fn random(len: usize, rng: &mut RandomStream) -> Self {
        BitVector {
            bits: (0..len).map(|_| rng.bit()).collect(),
        }
    }

    /// Big-endian bits of `value`, `len` wide.
    pub fn from_u64(value: u64, len: usize) -> Self {
        BitVector {
            bits: (0..len).map(|i| value >> (len - 1 - i) & 1 == 1).collect(),
        }
    }

    /// Big-endian integer value; requires `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len() <= 64, "bit vector too long for u64");
        self.bits.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Positions holding a 1, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self, CodeError> {
        self.check_len(other.len())?;
        Ok(BitVector {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> Result<bool, CodeError> {
        self.check_len(other.len())?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .fold(false, |acc, (a, b)| acc ^ (a & b)))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitVector { bits }
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        BitVector {
            bits: self.bits[start..start + len].to_vec(),
        }
    }

    /// Entries at `positions`, in the order given.
    pub fn select(&self, positions: &[usize]) -> Self {
        BitVector {
            bits: positions.iter().map(|&i| self.bits[i]).collect(),
        }
    }

    /// Splits into consecutive chunks of `size`; a short tail is dropped.
    pub fn chunks(&self, size: usize) -> Vec<BitVector> {
        self.bits
            .chunks_exact(size)
            .map(|c| BitVector { bits: c.to_vec() })
            .collect()
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a BitVector>) -> Self {
        BitVector {
            bits: parts.into_iter().flat_map(|p| p.bits.iter().copied()).collect(),
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn check_len(&self, expected: usize) -> Result<(), CodeError> {
        if self.len() != expected {
            return Err(CodeError::LengthMismatch {
                expected,
                actual: self.len(),
            });
        }
        Ok(())
    }

    /// Packs bits MSB-first into bytes, zero-padding the last byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self, CodeError> {
        if bytes.len() * 8 < len {
            return Err(CodeError::LengthMismatch {
                expected: len.div_ceil(8),
                actual: bytes.len(),
            });
        }
        Ok(BitVector {
            bits: (0..len).map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1).collect(),
        })
    }

    /// Lower-case hex of [`to_bytes`](Self::to_bytes).
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self, CodeError> {
        if hex.len() % 2 != 0 {
            return Err(CodeError::Parse(format!("odd-length hex string {hex:?}")));
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&hex[i..i + 2], 16)
                    .map_err(|_| CodeError::Parse(format!("bad hex {hex:?}")))
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::from_bytes(&bytes, len)
    }
}

impl Index<usize> for BitVector {
    type Output = bool;
    fn index(&self, i: usize) -> &bool {
        &self.bits[i]
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    /// Panics on length mismatch; use [`BitVector::xor`] for a checked sum.
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        self.xor(rhs).expect("xor of unequal-length bit vectors")
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitVector {
            bits: iter.into_iter().collect(),
        }
    }
}

impl FromStr for BitVector {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodeError::Parse(format!("unexpected character {other:?}"))),
            })
            .collect()
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
