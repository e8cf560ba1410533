//! Prepare-and-measure BB84 with CSS-style coset keys.
//!
//! Alice sends `⌈(4+δ)·nv⌉` qubits, where `nv` is the total code length.
//! After sifting she keeps `2·nv` positions, sacrifices half of them as
//! check bits and masks the other half with a random C1 codeword `u`. The
//! key is the label of `u + C2` in C1, block by block.

mod config;
mod session;

pub use config::{Bb84Config, DEFAULT_THRESHOLD, MAX_SIFT_ATTEMPTS};
pub use session::{
    extract_key, lookup, measure_all, prepare, replay_consistent, run_bb84, run_bb84_over, sift, tags, Bb84Run,
    Bb84Session, NamedBits, SessionResult, ALICE_PRIVATE, BOB_PRIVATE,
};
