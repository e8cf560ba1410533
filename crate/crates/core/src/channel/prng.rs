use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::games::RandomStream;

const DOMAIN: &[u8] = b"dqke/schedule/v1";

/// Seed width of a schedule generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrngStrength {
    /// 128-bit seed.
    Strong,
    /// 16-bit seed, exhaustively searchable.
    Weak,
}

impl PrngStrength {
    pub fn seed_bits(self) -> u32 {
        match self {
            PrngStrength::Strong => 128,
            PrngStrength::Weak => 16,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PrngStrength::Strong => "strong",
            PrngStrength::Weak => "weak",
        }
    }
}

/// A pre-shared schedule key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrngSpec {
    pub strength: PrngStrength,
    pub seed: u128,
}

impl PrngSpec {
    /// Masks `seed` to the strength's width.
    pub fn new(strength: PrngStrength, seed: u128) -> Self {
        let seed = match strength {
            PrngStrength::Strong => seed,
            PrngStrength::Weak => seed & 0xffff,
        };
        PrngSpec { strength, seed }
    }

    /// Fresh uniform key: 2 words for strong, 1 bounded draw for weak.
    pub fn sample(strength: PrngStrength, rng: &mut RandomStream) -> Self {
        let seed = match strength {
            PrngStrength::Strong => rng.u128(),
            PrngStrength::Weak => u128::from(rng.below(1 << 16)),
        };
        PrngSpec { strength, seed }
    }

    pub fn generator(&self) -> KeyedPrng {
        KeyedPrng::new(*self)
    }
}

/// Counter-mode expander: block `i` is
/// `SHA-256(DOMAIN ‖ seed_le ‖ i_le)`, read as four little-endian words.
///
/// The strong variant hashes all 16 seed bytes, the weak one 2.
#[derive(Debug, Clone)]
pub struct KeyedPrng {
    seed_bytes: Vec<u8>,
    counter: u64,
    words: [u64; 4],
    next: usize,
}

impl KeyedPrng {
    pub fn new(spec: PrngSpec) -> Self {
        let width = (spec.strength.seed_bits() / 8) as usize;
        KeyedPrng {
            seed_bytes: spec.seed.to_le_bytes()[..width].to_vec(),
            counter: 0,
            words: [0; 4],
            next: 4,
        }
    }

    fn refill(&mut self) {
        let digest = Sha256::new()
            .chain_update(DOMAIN)
            .chain_update(&self.seed_bytes)
            .chain_update(self.counter.to_le_bytes())
            .finalize();
        for (w, chunk) in self.words.iter_mut().zip(digest.chunks_exact(8)) {
            *w = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        }
        self.counter += 1;
        self.next = 0;
    }

    pub fn next_u64(&mut self) -> u64 {
        if self.next == 4 {
            self.refill();
        }
        let w = self.words[self.next];
        self.next += 1;
        w
    }
}

/// Anything that yields exact uniform integers in `[0, n)`.
pub trait SlotSource {
    fn below(&mut self, n: u64) -> u64;
}

impl SlotSource for RandomStream {
    fn below(&mut self, n: u64) -> u64 {
        RandomStream::below(self, n)
    }
}

impl SlotSource for KeyedPrng {
    fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let zone = u64::MAX - (u64::MAX % n) - 1;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % n;
            }
        }
    }
}

/// `k` distinct values from `[0, n)` in draw order, via a partial
/// Fisher–Yates shuffle that stores only displaced entries.
pub fn sparse_sample(source: &mut impl SlotSource, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "cannot draw {k} distinct slots from {n}");
    let mut displaced: HashMap<usize, usize> = HashMap::with_capacity(2 * k);
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let j = i + source.below((n - i) as u64) as usize;
        let at_j = *displaced.get(&j).unwrap_or(&j);
        let at_i = *displaced.get(&i).unwrap_or(&i);
        displaced.insert(j, at_i);
        out.push(at_j);
    }
    out
}
