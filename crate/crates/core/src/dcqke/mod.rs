//! Covert QKE and DC-QKE.
//!
//! The covert sub-session runs BB84 inside time-bin slots picked by a
//! keyed generator; each qubit and each classical bit rides one slot. DC-QKE
//! adds an ordinary BB84 session whose key is handed over under coercion.
//! The two experiments here are the warden's covert game and the coercer's
//! deniability game, plus a reduction turning an adversary of the second
//! into a warden for the first.

mod config;
mod covert;
mod views;

pub use config::{required_slots, CovertQkeConfig};
pub use covert::{
    covert_game, covert_game_with, covert_observations, covert_session, labels, run_covert_qke,
    CovertSession, CovertTranscript,
};
pub use views::{
    build_views, deniability_experiment, faking_program, reduction_distinguisher, run_dc_qke, DcQke,
    DcQkeResult, OnSlots, Randomness, ReductionDistinguisher, View, OVERT_ATTEMPTS, PRNG_SEED,
};

#[cfg(test)]
mod tests;
