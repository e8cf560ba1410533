use serde::{Deserialize, Serialize};

use super::classical::ClassicalAuthChannel;
use crate::denial::{eve_decoy_attack, EvePolicy, EveRecord};
use crate::error::ProtocolError;
use crate::games::RandomStream;
use crate::StateVector;

/// Bit-flip qubit channel with an optional interceptor in front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitChannel {
    flip_probability: f64,
    interceptor: Option<EvePolicy>,
}

impl QubitChannel {
    pub fn new(flip_probability: f64) -> Result<Self, ProtocolError> {
        if !(0.0..=1.0).contains(&flip_probability) {
            return Err(ProtocolError::InvalidConfig(format!(
                "flip_probability {flip_probability} outside [0, 1]"
            )));
        }
        Ok(QubitChannel {
            flip_probability,
            interceptor: None,
        })
    }

    pub fn noiseless() -> Self {
        QubitChannel {
            flip_probability: 0.0,
            interceptor: None,
        }
    }

    pub fn with_interceptor(mut self, policy: EvePolicy) -> Self {
        self.interceptor = Some(policy);
        self
    }

    pub fn flip_probability(&self) -> f64 {
        self.flip_probability
    }

    pub fn interceptor(&self) -> Option<&EvePolicy> {
        self.interceptor.as_ref()
    }

    /// Interceptor first, then one Bernoulli flip draw per qubit.
    pub fn transmit(
        &self,
        states: &[StateVector],
        rng: &mut RandomStream,
    ) -> Result<(Vec<StateVector>, Option<EveRecord>), ProtocolError> {
        for psi in states {
            if psi.n_qubits() != 1 {
                return Err(crate::QuantumError::QubitCount {
                    expected: 1,
                    actual: psi.n_qubits(),
                }
                .into());
            }
        }
        let (mut delivered, record) = match &self.interceptor {
            Some(policy) => {
                let (fwd, rec) = eve_decoy_attack(policy, states, rng)?;
                (fwd, Some(rec))
            }
            None => (states.to_vec(), None),
        };
        for psi in &mut delivered {
            if rng.bernoulli(self.flip_probability) {
                *psi = psi.apply_x(0)?;
            }
        }
        Ok((delivered, record))
    }
}

pub fn transmit(
    channel: &QubitChannel,
    states: &[StateVector],
    rng: &mut RandomStream,
) -> Result<(Vec<StateVector>, Option<EveRecord>), ProtocolError> {
    channel.transmit(states, rng)
}

/// Carries single-qubit states from Alice to Bob.
pub trait QuantumLink {
    /// Delivered states plus any interception record. Classical traffic the
    /// link itself needs is appended to `log`.
    fn carry(
        &mut self,
        states: &[StateVector],
        log: &mut ClassicalAuthChannel,
        rng: &mut RandomStream,
    ) -> Result<(Vec<StateVector>, Option<EveRecord>), ProtocolError>;
}

impl QuantumLink for QubitChannel {
    fn carry(
        &mut self,
        states: &[StateVector],
        _: &mut ClassicalAuthChannel,
        rng: &mut RandomStream,
    ) -> Result<(Vec<StateVector>, Option<EveRecord>), ProtocolError> {
        self.transmit(states, rng)
    }
}
