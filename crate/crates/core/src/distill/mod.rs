//! Entanglement distillation and QKE over teleportation.
//!
//! Partially entangled pairs `cos θ|00⟩ + sin θ|11⟩` are filtered one at a
//! time into Φ+ (success probability `2·min(sin²θ, cos²θ)`, below the
//! asymptotic `H₂(cos²θ)`). Verification samples pairs and checks their
//! fidelity directly, which only a simulator can do. BB84 states are then
//! teleported over the surviving pairs.

mod decouple;
mod filter;
mod qke;
mod teleport;

pub use decouple::{decoupling, eve_decoupling_check, Decoupling, Partition, DECOUPLING_TOLERANCE};
pub use filter::{
    distill_batch, ebit_fidelity, filter_success_probability, procrustean_filter, verify_ebits, DistillReport,
    FilterOutcome, PartialPair, EBIT_TOLERANCE,
};
pub use qke::{
    qke_over_teleportation, TeleportLink, TeleportQkeRun, EBIT_ATTEMPT_BUDGET, TELEPORT_TAG, VERIFY_FRACTION,
};
pub use teleport::{teleport, Pauli, TeleportRecord};
