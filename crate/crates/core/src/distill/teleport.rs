use serde::{Deserialize, Serialize};

use super::filter::{ebit_fidelity, EBIT_TOLERANCE};
use crate::error::{ProtocolError, QuantumError};
use crate::games::RandomStream;
use crate::gf2::BitVector;
use crate::qcore::{gates, Basis};
use crate::StateVector;

/// Pauli correction applied on Bob's half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Z,
    /// `Z·X`: X first, then Z.
    ZX,
}

impl Pauli {
    /// Correction for Bell outcome `(m1, m2)`: `X^m2` then `Z^m1`.
    pub fn for_outcome(m1: bool, m2: bool) -> Self {
        match (m1, m2) {
            (false, false) => Pauli::I,
            (false, true) => Pauli::X,
            (true, false) => Pauli::Z,
            (true, true) => Pauli::ZX,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Z => "Z",
            Pauli::ZX => "ZX",
        }
    }
}

/// Alice's two Bell-measurement bits and Bob's correction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeleportRecord {
    pub classical_bits: BitVector,
    pub correction: Pauli,
}

impl TeleportRecord {
    /// Outcome as `2·m1 + m2`.
    pub fn outcome_index(&self) -> usize {
        2 * usize::from(self.classical_bits[0]) + usize::from(self.classical_bits[1])
    }
}

/// Teleports `psi` through a Φ+ pair.
///
/// Qubit order is `(psi, A, B)`; Alice applies CNOT(psi→A) and H(psi),
/// measures both (one draw each) and Bob applies `X^m2` then `Z^m1`.
pub fn teleport(
    psi: &StateVector,
    ebit: &StateVector,
    rng: &mut RandomStream,
) -> Result<(StateVector, TeleportRecord), ProtocolError> {
    if psi.n_qubits() != 1 {
        return Err(QuantumError::QubitCount {
            expected: 1,
            actual: psi.n_qubits(),
        }
        .into());
    }
    let fid = ebit_fidelity(ebit)?;
    if fid < 1.0 - EBIT_TOLERANCE {
        return Err(ProtocolError::VerificationAbort { fidelity: fid });
    }
    let joint = psi
        .tensor(ebit)?
        .apply_unitary(&gates::cnot(), &[0, 1])?
        .apply_unitary(&gates::hadamard(), &[0])?;
    let (m1, s1) = joint.measure_qubit(0, Basis::Computational, rng)?;
    let (m2, s2) = s1.measure_qubit(1, Basis::Computational, rng)?;
    let mut bob = s2.remove_qubit(0, m1)?.remove_qubit(0, m2)?;
    if m2 {
        bob = bob.apply_x(0)?;
    }
    if m1 {
        bob = bob.apply_unitary(&gates::pauli_z(), &[0])?;
    }
    let record = TeleportRecord {
        classical_bits: BitVector::from_bits(vec![m1, m2]),
        correction: Pauli::for_outcome(m1, m2),
    };
    Ok((bob, record))
}
