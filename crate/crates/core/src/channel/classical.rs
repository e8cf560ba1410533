use serde::{Deserialize, Serialize};

use crate::gf2::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

/// One authenticated classical message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub sender: Party,
    pub tag: String,
    pub payload: BitVector,
}

impl Envelope {
    /// Wire bytes, MSB-first, last byte zero-padded.
    pub fn bytes(&self) -> Vec<u8> {
        self.payload.to_bytes()
    }
}

/// Append-only log of an authenticated public channel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalAuthChannel {
    log: Vec<Envelope>,
}

impl ClassicalAuthChannel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Delivers `payload` unmodified and returns it.
    pub fn send(&mut self, sender: Party, tag: &str, payload: BitVector) -> BitVector {
        self.log.push(Envelope {
            sender,
            tag: tag.to_owned(),
            payload: payload.clone(),
        });
        payload
    }

    pub fn log(&self) -> &[Envelope] {
        &self.log
    }

    /// First message carrying `tag`.
    pub fn find(&self, tag: &str) -> Option<&Envelope> {
        self.log.iter().find(|e| e.tag == tag)
    }

    pub fn total_bits(&self) -> usize {
        self.log.iter().map(|e| e.payload.len()).sum()
    }

    pub fn tags(&self) -> Vec<&str> {
        self.log.iter().map(|e| e.tag.as_str()).collect()
    }
}
