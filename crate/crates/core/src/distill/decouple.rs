use serde::{Deserialize, Serialize};

use crate::error::QuantumError;
use crate::{DensityMatrix, StateVector};

/// Tolerance of both decoupling conditions.
pub const DECOUPLING_TOLERANCE: f64 = 1e-9;

/// Qubit roles in a global pure state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub a: usize,
    pub b: usize,
    pub e: Vec<usize>,
}

impl Partition {
    /// A = 0, B = 1, E = the remaining qubits.
    pub fn standard(n_qubits: usize) -> Self {
        Partition {
            a: 0,
            b: 1,
            e: (2..n_qubits).collect(),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<Vec<usize>, QuantumError> {
        let order: Vec<usize> = [self.a, self.b].into_iter().chain(self.e.iter().copied()).collect();
        let mut seen = vec![false; n_qubits];
        for &q in &order {
            if q >= n_qubits {
                return Err(QuantumError::IndexOutOfRange { index: q, n_qubits });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(QuantumError::DuplicateTarget);
            }
        }
        if self.e.is_empty() || seen.contains(&false) {
            return Err(QuantumError::InvalidKeepSet);
        }
        Ok(order)
    }
}

/// Diagnostics behind [`eve_decoupling_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decoupling {
    /// Largest eigenvalue of ρ_AB.
    pub ab_purity_eigenvalue: f64,
    /// Trace distance of ρ_A from I/2.
    pub a_mixedness_gap: f64,
    /// Trace distance between ρ_ABE and ρ_AB ⊗ ρ_E; `None` if AB failed.
    pub product_distance: Option<f64>,
}

impl Decoupling {
    pub fn passed(&self) -> bool {
        matches!(self.product_distance, Some(d) if d < DECOUPLING_TOLERANCE)
    }
}

pub fn decoupling(global: &StateVector, partition: &Partition) -> Result<Decoupling, QuantumError> {
    let order = partition.validate(global.n_qubits())?;
    let rho = DensityMatrix::from_pure(global).partial_trace(&order)?;
    let ab = rho.partial_trace(&[0, 1])?;
    let top = ab.eigenvalues().last().copied().unwrap_or(0.0);
    let a = ab.partial_trace(&[0])?;
    let gap = a.trace_distance(&DensityMatrix::maximally_mixed(1)?)?;
    let maximal = top >= 1.0 - DECOUPLING_TOLERANCE && gap <= DECOUPLING_TOLERANCE;
    let product_distance = if maximal {
        let e_idx: Vec<usize> = (2..order.len()).collect();
        let e = rho.partial_trace(&e_idx)?;
        Some(rho.trace_distance(&ab.tensor(&e)?)?)
    } else {
        None
    };
    Ok(Decoupling {
        ab_purity_eigenvalue: top,
        a_mixedness_gap: gap,
        product_distance,
    })
}

/// True iff AB holds a maximally entangled pure pair (up to local
/// unitaries) and the global state factors as `ρ_AB ⊗ ρ_E`.
pub fn eve_decoupling_check(global: &StateVector, partition: &Partition) -> Result<bool, QuantumError> {
    Ok(decoupling(global, partition)?.passed())
}
