use serde::{Deserialize, Serialize};

use super::config::CovertQkeConfig;
use crate::bb84::{run_bb84, Bb84Run};
use crate::channel::{
    prng_schedule, warden_observe, ClassicalAuthChannel, CountTestWarden, CovertSchedule, PrngSpec,
    QubitChannel, WardenObservation,
};
use crate::error::{ExperimentError, ProtocolError};
use crate::games::{run_experiment, AdvantageEstimate, Distinguisher, ExperimentConfig, RandomStream, Trial};
use crate::gf2::BitVector;

/// Substream labels of one covert-game or deniability trial.
pub mod labels {
    pub const COVERT: &str = "covert";
    pub const OVERT: &str = "overt";
    pub const IDLE: &str = "idle";
}

/// What the covert sub-session put on the time-bin channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovertTranscript {
    pub schedule: CovertSchedule,
    /// Every classical message of every sift attempt.
    pub classical: ClassicalAuthChannel,
    /// Slots carrying qubits, in transmission order.
    pub qubit_slots: Vec<usize>,
    /// Slots carrying classical bits, in transmission order.
    pub classical_slots: Vec<usize>,
}

/// One covert session, kept even when the protocol fails.
///
/// Every scheduled slot carries a pulse whether or not the protocol needs
/// it, so `warden_view` depends only on the schedule.
#[derive(Debug, Clone)]
pub struct CovertSession {
    pub prng: PrngSpec,
    pub schedule: CovertSchedule,
    pub warden_view: WardenObservation,
    pub outcome: Result<(Bb84Run, CovertTranscript), ProtocolError>,
}

/// Runs the covert sub-session from `root`.
///
/// Forks, in order: `prng-key`, `alice`, `bob`, `chan`, `warden`.
pub fn covert_session(config: &CovertQkeConfig, root: &mut RandomStream) -> Result<CovertSession, ProtocolError> {
    let prng = PrngSpec::sample(config.prng(), &mut root.fork("prng-key"));
    let schedule = prng_schedule(config.channel().n_slots(), config.n_used(), prng)?;
    let (mut ra, mut rb, mut rc) = (root.fork("alice"), root.fork("bob"), root.fork("chan"));
    let mut classical = ClassicalAuthChannel::new();
    let run = run_bb84(config.bb84(), &QubitChannel::noiseless(), &mut classical, &mut ra, &mut rb, &mut rc);
    let warden_view = warden_observe(config.channel(), Some(&schedule), &mut root.fork("warden"))?;
    let outcome = run.and_then(|run| {
        let qubits = run.session.attempts * config.bb84().qubit_count();
        let bits = classical.total_bits();
        if qubits + bits > schedule.len() {
            return Err(ProtocolError::CovertCapacity {
                needed: qubits + bits,
                available: schedule.len(),
            });
        }
        let transcript = CovertTranscript {
            schedule: schedule.clone(),
            classical,
            qubit_slots: schedule.used_slots[..qubits].to_vec(),
            classical_slots: schedule.used_slots[qubits..qubits + bits].to_vec(),
        };
        Ok((run, transcript))
    });
    Ok(CovertSession {
        prng,
        schedule,
        warden_view,
        outcome,
    })
}

/// Covert QKE: the key, the covert transcript and the warden's slot record.
pub fn run_covert_qke(
    config: &CovertQkeConfig,
    rng: &mut RandomStream,
) -> Result<(BitVector, CovertTranscript, WardenObservation), ProtocolError> {
    let session = covert_session(config, rng)?;
    let (run, transcript) = session.outcome?;
    Ok((run.alice.session_key, transcript, session.warden_view))
}

/// Warden observations `(covert session running, channel idle)` of a trial.
pub fn covert_observations(
    config: &CovertQkeConfig,
    trial: &Trial,
) -> Result<(WardenObservation, WardenObservation), ProtocolError> {
    let active = covert_session(config, &mut trial.stream(labels::COVERT))?.warden_view;
    let idle = warden_observe(config.channel(), None, &mut trial.stream(labels::IDLE))?;
    Ok((active, idle))
}

/// Covert-game advantage of the optimal count-test warden.
pub fn covert_game(config: &CovertQkeConfig, exp: &ExperimentConfig) -> Result<AdvantageEstimate, ExperimentError> {
    let warden = CountTestWarden::new(config.channel(), config.n_used())?;
    covert_game_with(config, &warden, exp)
}

/// Covert game against an arbitrary warden.
pub fn covert_game_with<D>(
    config: &CovertQkeConfig,
    warden: &D,
    exp: &ExperimentConfig,
) -> Result<AdvantageEstimate, ExperimentError>
where
    D: Distinguisher<WardenObservation> + ?Sized,
{
    run_experiment(|t: &Trial| covert_observations(config, t), warden, exp)
}
