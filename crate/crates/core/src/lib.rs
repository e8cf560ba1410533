//! Simulation laboratory for deniability in quantum key exchange.
//!
//! The crate simulates BB84, uncloneable encryption and QKE built on it, the
//! decoy-state eavesdropping attack on naive denial, covert QKE over a
//! time-bin channel with a statistical warden, DC-QKE (covert key plus an
//! honest decoy session) and entanglement distillation followed by
//! teleportation. Every security notion is exercised as a finite-sample
//! distinguishing game.
//!
//! The state-level core is generic over the real scalar; the aliases below
//! fix it to `f64`, which is what the protocol layers use.

pub mod bb84;
pub mod channel;
pub mod dcqke;
pub mod denial;
pub mod distill;
pub mod error;
pub mod games;
pub mod gf2;
pub mod qcore;
pub mod scalar;
pub mod ue;

pub use error::{CodeError, ExperimentError, ProtocolError, QuantumError};
pub use games::{AdvantageEstimate, RandomStream, RateEstimate, Seed};
pub use scalar::Scalar;

/// Double-precision pure state.
pub type StateVector = qcore::StateVector<f64>;
/// Double-precision mixed state.
pub type DensityMatrix = qcore::DensityMatrix<f64>;
/// Double-precision complex operator.
pub type Matrix = qcore::Matrix<f64>;
/// Complex amplitude.
pub type C64 = num_complex::Complex<f64>;
