use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;
use crate::games::RandomStream;
use crate::qcore::{measure, Basis};
use crate::StateVector;

/// Intercept-resend policy: measure each qubit independently with
/// `measure_probability`, in a uniformly random basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvePolicy {
    measure_probability: f64,
}

impl EvePolicy {
    pub fn new(measure_probability: f64) -> Result<Self, ProtocolError> {
        if !(0.0..=1.0).contains(&measure_probability) {
            return Err(ProtocolError::InvalidConfig(format!(
                "measure_probability {measure_probability} outside [0, 1]"
            )));
        }
        Ok(EvePolicy {
            measure_probability,
        })
    }

    /// Decoy rate `eta / n` over a stream of `n` qubits.
    pub fn decoys(eta: usize, n: usize) -> Result<Self, ProtocolError> {
        if n == 0 || eta > n {
            return Err(ProtocolError::InvalidConfig(format!(
                "eta = {eta} must not exceed N = {n}"
            )));
        }
        Self::new(eta as f64 / n as f64)
    }

    pub fn measure_probability(&self) -> f64 {
        self.measure_probability
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveEntry {
    pub position: usize,
    pub basis: Basis,
    pub outcome: bool,
}

/// Eve's measured positions, strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    entries: Vec<EveEntry>,
}

impl EveRecord {
    pub fn new(mut entries: Vec<EveEntry>) -> Self {
        entries.sort_by_key(|e| e.position);
        entries.dedup_by_key(|e| e.position);
        EveRecord { entries }
    }

    pub fn entries(&self) -> &[EveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn at(&self, position: usize) -> Option<&EveEntry> {
        self.entries
            .binary_search_by_key(&position, |e| e.position)
            .ok()
            .map(|i| &self.entries[i])
    }
}

/// Applies `policy` to every qubit.
///
/// Per qubit: one Bernoulli draw; if measured, one draw for the basis and
/// one for the outcome. Measured qubits are forwarded collapsed.
pub fn eve_decoy_attack(
    policy: &EvePolicy,
    states: &[StateVector],
    rng: &mut RandomStream,
) -> Result<(Vec<StateVector>, EveRecord), ProtocolError> {
    let mut forwarded = Vec::with_capacity(states.len());
    let mut entries = Vec::new();
    for (position, psi) in states.iter().enumerate() {
        if rng.bernoulli(policy.measure_probability) {
            let basis = Basis::from_bit(rng.bit());
            let (outcome, collapsed) = measure(psi, basis, rng)?;
            entries.push(EveEntry {
                position,
                basis,
                outcome,
            });
            forwarded.push(collapsed);
        } else {
            forwarded.push(psi.clone());
        }
    }
    Ok((forwarded, EveRecord { entries }))
}
