//! Uncloneable encryption, its fake-pad denial and QKE built on it.
//!
//! A message `m` is tagged, one-time padded to `y = (m‖μ) ⊕ e` and spread
//! over constrained codewords `z` of a dual-containing code pair, one block
//! per payload chunk. Each `z_i` is sent as a BB84 state in the secret basis
//! `b_i`.
//!
//! Key material serialises as `{k, e, c1_syn, b}` with hex fields.

mod mac;
mod qke;
mod scheme;

pub use mac::{smallest_irreducible, MacScheme, MAX_TAG_BITS};
pub use qke::{qke_from_ue, tags, ue_denial_detection, UeQkeRun};
pub use scheme::{
    decode_payload, encode_states, mac_tag, open_payload, ue_codeword, ue_decrypt, ue_encrypt, ue_fake,
    ue_fake_with_mac_key, ue_judge_replay, UeKey, UeKeyHex, UeParams,
};
