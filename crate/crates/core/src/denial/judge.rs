use serde::{Deserialize, Serialize};

use super::eve::EveRecord;
use crate::games::RandomStream;
use crate::gf2::BitVector;
use crate::qcore::Basis;

/// What a coerced party claims to have sent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenialClaim {
    pub claimed_bits: BitVector,
    pub claimed_bases: BitVector,
    /// Positions where the claim departs from the truth. Bookkeeping only;
    /// the judge never reads it.
    pub flipped_positions: Vec<usize>,
}

impl DenialClaim {
    pub fn honest(bits: BitVector, bases: BitVector) -> Self {
        DenialClaim {
            claimed_bits: bits,
            claimed_bases: bases,
            flipped_positions: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgeVerdict {
    pub detected: bool,
    pub witness_position: Option<usize>,
}

/// Flags the first record entry measured in the claimed basis whose outcome
/// contradicts the claimed bit. Entries outside the claim are ignored.
pub fn judge_check(claim: &DenialClaim, record: &EveRecord) -> JudgeVerdict {
    let n = claim.claimed_bits.len().min(claim.claimed_bases.len());
    let witness = record
        .entries()
        .iter()
        .filter(|e| e.position < n)
        .find(|e| {
            e.basis == Basis::from_bit(claim.claimed_bases[e.position])
                && e.outcome != claim.claimed_bits[e.position]
        })
        .map(|e| e.position);
    JudgeVerdict {
        detected: witness.is_some(),
        witness_position: witness,
    }
}

/// Flips `min(flips, |sifted|)` distinct uniformly chosen sifted positions.
pub fn deny_by_flipping(
    bits: &BitVector,
    bases: &BitVector,
    sifted: &[usize],
    flips: usize,
    rng: &mut RandomStream,
) -> DenialClaim {
    let k = flips.min(sifted.len());
    let mut flipped: Vec<usize> = rng
        .distinct_indices(sifted.len(), k)
        .into_iter()
        .map(|i| sifted[i])
        .collect();
    flipped.sort_unstable();
    let mut claimed = bits.clone();
    for &i in &flipped {
        claimed.flip(i);
    }
    DenialClaim {
        claimed_bits: claimed,
        claimed_bases: bases.clone(),
        flipped_positions: flipped,
    }
}
