//! Decoy-state eavesdropping, the judge's consistency check and the
//! coercer-deniability experiment for BB84.
//!
//! Eve measures a fraction `η/N` of the qubits in random bases and keeps a
//! record. A party that later claims different raw bits is caught whenever
//! Eve happened to measure a flipped position in the sending basis, so one
//! flip is caught with probability `η/(2N)`.

mod coercion;
mod detection;
mod eve;
mod judge;

pub use coercion::{
    coercer_experiment, Bb84CoercedView, CoercibleProtocol, Disclosure, HonestBb84, JudgeAdversary,
    NaiveBb84Denial,
};
pub use detection::{detection_probability, detection_trial, exact_detection_probability, MAX_EXACT_N};
pub use eve::{eve_decoy_attack, EveEntry, EvePolicy, EveRecord};
pub use judge::{deny_by_flipping, judge_check, DenialClaim, JudgeVerdict};
