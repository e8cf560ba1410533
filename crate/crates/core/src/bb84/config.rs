use crate::error::ProtocolError;
use crate::gf2::{BinaryLinearCode, NestedCodePair};

pub const DEFAULT_THRESHOLD: f64 = 0.11;
/// Sessions are restarted from scratch at most this many times when sifting
/// leaves fewer than `2·nv` bits.
pub const MAX_SIFT_ATTEMPTS: usize = 32;

#[derive(Debug, Clone)]
pub struct Bb84Config {
    key_blocks: usize,
    delta: f64,
    error_threshold: f64,
    codes: NestedCodePair,
}

impl Bb84Config {
    pub fn new(
        key_blocks: usize,
        delta: f64,
        error_threshold: f64,
        codes: NestedCodePair,
    ) -> Result<Self, ProtocolError> {
        let cfg = Bb84Config {
            key_blocks,
            delta,
            error_threshold,
            codes,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Hamming[7,4] over repetition[7,1] with `δ = 4/7`; 16 blocks give
    /// 512 qubits and a 48-bit key.
    pub fn toy(key_blocks: usize) -> Result<Self, ProtocolError> {
        Self::new(key_blocks, 4.0 / 7.0, DEFAULT_THRESHOLD, NestedCodePair::toy())
    }

    /// Smallest useful session: C1 = F₂², C2 = {00, 11}, one block, `δ = 1`.
    /// 10 qubits carry a 1-bit key.
    pub fn minimal() -> Self {
        let codes = NestedCodePair::new(
            BinaryLinearCode::full_space(2),
            BinaryLinearCode::repetition(2),
        )
        .expect("repetition(2) lies inside F2^2");
        Self::new(1, 1.0, DEFAULT_THRESHOLD, codes).expect("valid")
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let bad = |m: String| Err(ProtocolError::InvalidConfig(m));
        if self.key_blocks == 0 {
            return bad("key_blocks must be positive".into());
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if !(0.0..=1.0).contains(&self.error_threshold) {
            return bad(format!("error_threshold {} outside [0, 1]", self.error_threshold));
        }
        if self.qubit_count() < 4 * self.code_bits() {
            return bad("qubit count below 2·(check bits + code bits)".into());
        }
        Ok(())
    }

    pub fn key_blocks(&self) -> usize {
        self.key_blocks
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn error_threshold(&self) -> f64 {
        self.error_threshold
    }

    pub fn codes(&self) -> &NestedCodePair {
        &self.codes
    }

    /// `nv`: code bits, which also equals the number of check bits.
    pub fn code_bits(&self) -> usize {
        self.key_blocks * self.codes.n()
    }

    /// `⌈(4 + δ)·nv⌉`.
    pub fn qubit_count(&self) -> usize {
        ((4.0 + self.delta) * self.code_bits() as f64 - 1e-9).ceil() as usize
    }

    pub fn key_len(&self) -> usize {
        self.key_blocks * self.codes.key_len()
    }
}
