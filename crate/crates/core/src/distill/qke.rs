use std::collections::VecDeque;

use super::filter::{distill_batch, filter_success_probability, verify_ebits, DistillReport};
use super::teleport::{teleport, TeleportRecord};
use crate::bb84::{run_bb84_over, Bb84Config, Bb84Run};
use crate::channel::{ClassicalAuthChannel, Party, QuantumLink};
use crate::denial::EveRecord;
use crate::error::ProtocolError;
use crate::games::RandomStream;
use crate::gf2::BitVector;
use crate::StateVector;

/// Transcript tag of the teleportation bits of one transmission.
pub const TELEPORT_TAG: &str = "teleport";

/// Fraction of distilled pairs sacrificed to verification.
pub const VERIFY_FRACTION: f64 = 0.1;

/// Sift attempts the distilled stock is sized for.
pub const EBIT_ATTEMPT_BUDGET: usize = 2;

/// Quantum link that teleports every state through a stored ebit.
#[derive(Debug, Clone)]
pub struct TeleportLink {
    ebits: VecDeque<StateVector>,
    rng: RandomStream,
    records: Vec<TeleportRecord>,
}

impl TeleportLink {
    /// `rng` drives Alice's Bell measurements.
    pub fn new(ebits: Vec<StateVector>, rng: RandomStream) -> Self {
        TeleportLink {
            ebits: ebits.into(),
            rng,
            records: Vec::new(),
        }
    }

    pub fn records(&self) -> &[TeleportRecord] {
        &self.records
    }

    pub fn remaining(&self) -> usize {
        self.ebits.len()
    }
}

impl QuantumLink for TeleportLink {
    fn carry(
        &mut self,
        states: &[StateVector],
        log: &mut ClassicalAuthChannel,
        _: &mut RandomStream,
    ) -> Result<(Vec<StateVector>, Option<EveRecord>), ProtocolError> {
        if states.len() > self.ebits.len() {
            return Err(ProtocolError::DistillShortfall {
                got: self.ebits.len(),
                needed: states.len(),
            });
        }
        let mut delivered = Vec::with_capacity(states.len());
        let mut bits = Vec::with_capacity(2 * states.len());
        for psi in states {
            let ebit = self.ebits.pop_front().expect("checked above");
            let (out, record) = teleport(psi, &ebit, &mut self.rng)?;
            bits.extend(record.classical_bits.iter());
            self.records.push(record);
            delivered.push(out);
        }
        log.send(Party::Alice, TELEPORT_TAG, BitVector::from_bits(bits));
        Ok((delivered, None))
    }
}

#[derive(Debug, Clone)]
pub struct TeleportQkeRun {
    pub key_a: BitVector,
    pub key_b: BitVector,
    /// Teleportation bits and BB84 messages of every attempt.
    pub transcript: ClassicalAuthChannel,
    pub report: DistillReport,
    pub verified: usize,
    pub records: Vec<TeleportRecord>,
    pub bb84: Bb84Run,
}

/// Pairs to filter so that, in expectation with margin, at least `needed`
/// survive verification.
fn pairs_for(needed: usize, theta: f64) -> usize {
    let target = (needed as f64 / (1.0 - VERIFY_FRACTION)).ceil() + 1.0;
    let padded = target + 4.0 * target.sqrt() + 8.0;
    (padded / filter_success_probability(theta)).ceil() as usize
}

/// BB84 whose qubits travel by teleportation over distilled ebits.
///
/// Forks `distill`, `verify`, `teleport`, `alice`, `bob` and `chan`.
pub fn qke_over_teleportation(
    config: &Bb84Config,
    theta: f64,
    rng: &mut RandomStream,
) -> Result<TeleportQkeRun, ProtocolError> {
    config.validate()?;
    let needed = EBIT_ATTEMPT_BUDGET * config.qubit_count();
    let (ebits, report) = distill_batch(pairs_for(needed, theta), theta, &mut rng.fork("distill"))?;
    if ebits.is_empty() {
        return Err(ProtocolError::DistillShortfall { got: 0, needed });
    }
    let kept = verify_ebits(&ebits, VERIFY_FRACTION, &mut rng.fork("verify"))?;
    if kept.len() < config.qubit_count() {
        return Err(ProtocolError::DistillShortfall {
            got: kept.len(),
            needed: config.qubit_count(),
        });
    }
    let verified = ebits.len() - kept.len();
    let mut link = TeleportLink::new(kept, rng.fork("teleport"));
    let mut transcript = ClassicalAuthChannel::new();
    let (mut ra, mut rb, mut rc) = (rng.fork("alice"), rng.fork("bob"), rng.fork("chan"));
    let bb84 = run_bb84_over(config, &mut link, &mut transcript, &mut ra, &mut rb, &mut rc)?;
    Ok(TeleportQkeRun {
        key_a: bb84.alice.session_key.clone(),
        key_b: bb84.bob.session_key.clone(),
        transcript,
        report,
        verified,
        records: link.records,
        bb84,
    })
}
