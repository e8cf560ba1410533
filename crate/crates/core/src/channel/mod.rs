//! Simulated transmission media.
//!
//! * [`QubitChannel`]: per-qubit bit-flip noise behind an optional
//!   intercept-resend hook.
//! * [`ClassicalAuthChannel`]: append-only authenticated public log.
//! * [`TimeBinChannel`]: slots that click with `p_dark` when idle and
//!   `p_signal` when carrying a pulse, watched by a warden.
//!
//! Covert schedules come either from true randomness or from [`KeyedPrng`],
//! a SHA-256 counter-mode expander of a pre-shared key (128-bit or 16-bit).

mod classical;
mod prng;
mod qubit;
mod timebin;
mod warden;

pub use classical::{ClassicalAuthChannel, Envelope, Party};
pub use prng::{sparse_sample, KeyedPrng, PrngSpec, PrngStrength, SlotSource};
pub use qubit::{transmit, QuantumLink, QubitChannel};
pub use timebin::{
    covert_schedule, detection_count_pmfs, max_covert_slots, prng_schedule, warden_bias_exact,
    warden_observe, CovertSchedule, ScheduleSource, TimeBinChannel, WardenObservation,
};
pub use warden::{CountTestWarden, SeedSearchWarden};

#[cfg(test)]
mod tests;
