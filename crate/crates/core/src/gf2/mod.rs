//! Binary linear algebra and small-code machinery.
//!
//! Codes here are tiny (block length ≤ 20), so decoding is exact
//! coset-leader lookup with lexicographic tie-breaking. Longer messages are
//! handled by the callers through block repetition.

mod bits;
mod code;
mod matrix;
mod nested;

pub use bits::BitVector;
pub use code::{BinaryLinearCode, MAX_TABLE_LENGTH};
pub use matrix::{BitMatrix, Echelon};
pub use nested::{CodePair, DualContainingPair, NestedCodePair};

use crate::error::CodeError;
use crate::games::RandomStream;

pub fn syndrome(code: &BinaryLinearCode, v: &BitVector) -> Result<BitVector, CodeError> {
    code.syndrome(v)
}

pub fn decode_to_codeword(code: &BinaryLinearCode, word: &BitVector) -> Result<BitVector, CodeError> {
    code.decode_to_codeword(word)
}

pub fn coset_leader(code: &BinaryLinearCode, syn: &BitVector) -> Result<BitVector, CodeError> {
    code.coset_leader(syn)
}

pub fn key_from_coset(pair: &NestedCodePair, u: &BitVector) -> Result<BitVector, CodeError> {
    pair.key_from_coset(u)
}

pub fn sample_codeword(code: &BinaryLinearCode, rng: &mut RandomStream) -> BitVector {
    code.sample_codeword(rng)
}

pub fn encode_ue_codeword(
    pair: &DualContainingPair,
    c1_syn: &BitVector,
    y: &BitVector,
    rng: &mut RandomStream,
) -> Result<BitVector, CodeError> {
    pair.encode_ue_codeword(c1_syn, y, rng)
}

pub fn verify_nesting(pair: &impl CodePair) -> bool {
    pair.verify_nesting()
}

#[cfg(test)]
mod tests;
