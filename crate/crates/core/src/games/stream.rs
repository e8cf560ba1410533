//! Seeded counter-based random streams.
//!
//! Every stream is a ChaCha20 keystream whose key is
//! `SHA-256("dqke/stream/v1" || seed_le || len(label)_le || label || index_le)`.
//! Identical `(seed, label, index)` triples always give identical streams, and
//! nothing in the crate reads ambient entropy.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

/// 128-bit master seed, written as 32 hex characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u128);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("seed must be exactly 32 hex characters, got {0:?}")]
pub struct SeedParseError(pub String);

impl FromStr for Seed {
    type Err = SeedParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.len() != 32 || !t.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(SeedParseError(s.to_string()));
        }
        u128::from_str_radix(t, 16)
            .map(Seed)
            .map_err(|_| SeedParseError(s.to_string()))
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic random stream addressed by `(seed, label, index)`.
#[derive(Clone, Debug)]
pub struct RandomStream {
    inner: ChaCha20Rng,
}

impl RandomStream {
    pub fn derive(seed: Seed, label: &str, index: u64) -> Self {
        let mut h = Sha256::new();
        h.update(b"dqke/stream/v1");
        h.update(seed.0.to_le_bytes());
        h.update((label.len() as u64).to_le_bytes());
        h.update(label.as_bytes());
        h.update(index.to_le_bytes());
        let digest = h.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        RandomStream {
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    /// Child stream keyed by a value drawn from this one.
    pub fn fork(&mut self, label: &str) -> Self {
        let lo = self.inner.next_u64() as u128;
        let hi = self.inner.next_u64() as u128;
        Self::derive(Seed(hi << 64 | lo), label, 0)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bit(&mut self) -> bool {
        self.inner.next_u64() >> 63 == 1
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        // rejection sampling on the top of the range keeps the draw exact
        let zone = u64::MAX - (u64::MAX % n) - 1;
        loop {
            let v = self.inner.next_u64();
            if v <= zone {
                return v % n;
            }
        }
    }

    pub fn u128(&mut self) -> u128 {
        let lo = self.inner.next_u64() as u128;
        let hi = self.inner.next_u64() as u128;
        hi << 64 | lo
    }

    /// `k` distinct indices from `[0, n)`, uniform over k-subsets, in draw order.
    pub fn distinct_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct indices from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_triple_same_stream() {
        let mut a = RandomStream::derive(Seed(7), "x", 3);
        let mut b = RandomStream::derive(Seed(7), "x", 3);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn labels_and_indices_separate_streams() {
        let mut a = RandomStream::derive(Seed(7), "x", 3);
        let mut b = RandomStream::derive(Seed(7), "y", 3);
        let mut c = RandomStream::derive(Seed(7), "x", 4);
        let va = a.next_u64();
        assert_ne!(va, b.next_u64());
        assert_ne!(va, c.next_u64());
    }

    #[test]
    fn seed_hex_round_trip() {
        let s: Seed = "000000000000000000000000000000ff".parse().unwrap();
        assert_eq!(s, Seed(255));
        assert_eq!(s.to_string(), "000000000000000000000000000000ff");
        assert!("ff".parse::<Seed>().is_err());
        assert!("zz000000000000000000000000000000".parse::<Seed>().is_err());
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = RandomStream::derive(Seed(1), "below", 0);
        for n in 1..50u64 {
            for _ in 0..20 {
                assert!(r.below(n) < n);
            }
        }
    }

    #[test]
    fn distinct_indices_are_distinct() {
        let mut r = RandomStream::derive(Seed(1), "idx", 0);
        let mut v = r.distinct_indices(100, 40);
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 40);
        assert!(v.iter().all(|&i| i < 100));
    }
}
