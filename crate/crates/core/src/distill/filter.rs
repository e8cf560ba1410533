use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{ProtocolError, QuantumError};
use crate::games::RandomStream;
use crate::qcore::{bell_state, binary_entropy, BellKind, Basis};
use crate::{Matrix, StateVector};

/// Ebits must match Φ+ to within this much fidelity.
pub const EBIT_TOLERANCE: f64 = 1e-9;

/// `cos θ|00⟩ + sin θ|11⟩` with `θ ∈ (0, π/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialPair {
    theta: f64,
    state: StateVector,
}

impl PartialPair {
    pub fn new(theta: f64) -> Result<Self, ProtocolError> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(ProtocolError::InvalidConfig(format!("theta {theta} outside (0, pi/2)")));
        }
        let state = StateVector::from_real(&[theta.cos(), 0.0, 0.0, theta.sin()])?;
        Ok(PartialPair { theta, state })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }
}

/// Result of filtering one pair.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterOutcome {
    Success(StateVector),
    Failure,
}

impl FilterOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, FilterOutcome::Success(_))
    }
}

/// `2·min(sin²θ, cos²θ)`.
pub fn filter_success_probability(theta: f64) -> f64 {
    2.0 * theta.sin().powi(2).min(theta.cos().powi(2))
}

/// `|⟨Φ+|ψ⟩|²` for a two-qubit state.
pub fn ebit_fidelity(pair: &StateVector) -> Result<f64, QuantumError> {
    if pair.n_qubits() != 2 {
        return Err(QuantumError::QubitCount {
            expected: 2,
            actual: pair.n_qubits(),
        });
    }
    pair.overlap(&bell_state(BellKind::PhiPlus))
}

/// Controlled rotation on `(A, flag)`: when A reads `control`, the flag's
/// `|0⟩` amplitude is scaled by `keep`.
fn filter_unitary(control: bool, keep: f64) -> Matrix {
    let leak = (1.0 - keep * keep).max(0.0).sqrt();
    let rot = [[keep, -leak], [leak, keep]];
    let mut rows = [[0.0; 4]; 4];
    for a in 0..2 {
        for (i, row) in rot.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rows[2 * a + i][2 * a + j] = if (a == 1) == control { v } else { f64::from(u8::from(i == j)) };
            }
        }
    }
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_real_rows(&refs)
}

/// Local filter on Alice's half.
///
/// A flag qubit is attached, rotated conditional on the larger Schmidt
/// component and measured with one uniform draw; flag 0 leaves Φ+.
pub fn procrustean_filter(pair: &PartialPair, rng: &mut RandomStream) -> Result<FilterOutcome, QuantumError> {
    let (c, s) = (pair.theta.cos(), pair.theta.sin());
    let (control, keep) = if c >= s { (false, s / c) } else { (true, c / s) };
    let joint = pair.state.tensor(&StateVector::basis_state(1, 0)?)?;
    let rotated = joint.apply_unitary(&filter_unitary(control, keep), &[0, 2])?;
    let (flag, post) = rotated.measure_qubit(2, Basis::Computational, rng)?;
    if flag {
        return Ok(FilterOutcome::Failure);
    }
    Ok(FilterOutcome::Success(post.remove_qubit(2, false)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistillReport {
    pub theta: f64,
    pub attempted: usize,
    pub succeeded: usize,
    /// Lowest Φ+ fidelity among successes; 1 when nothing succeeded.
    pub output_fidelity_min: f64,
    /// `H₂(cos²θ)` ebits per pair.
    pub rate_bound: f64,
}

impl DistillReport {
    pub fn rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.succeeded as f64 / self.attempted as f64
        }
    }

    pub fn expected_rate(&self) -> f64 {
        filter_success_probability(self.theta)
    }
}

/// Filters `n` fresh pairs in order, one draw each.
pub fn distill_batch(
    n: usize,
    theta: f64,
    rng: &mut RandomStream,
) -> Result<(Vec<StateVector>, DistillReport), ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::InvalidConfig("need at least one pair".into()));
    }
    let pair = PartialPair::new(theta)?;
    let mut ebits = Vec::new();
    let mut fid_min = 1.0f64;
    for _ in 0..n {
        if let FilterOutcome::Success(out) = procrustean_filter(&pair, rng)? {
            fid_min = fid_min.min(ebit_fidelity(&out)?);
            ebits.push(out);
        }
    }
    let report = DistillReport {
        theta,
        attempted: n,
        succeeded: ebits.len(),
        output_fidelity_min: fid_min,
        rate_bound: binary_entropy(theta.cos().powi(2)),
    };
    Ok((ebits, report))
}

/// Sacrifices `⌈fraction·len⌉` random pairs for a direct fidelity check and
/// returns the rest in their original order.
///
/// Aborts if any sampled pair is further than [`EBIT_TOLERANCE`] from Φ+.
pub fn verify_ebits(
    pairs: &[StateVector],
    sample_fraction: f64,
    rng: &mut RandomStream,
) -> Result<Vec<StateVector>, ProtocolError> {
    if pairs.is_empty() {
        return Err(ProtocolError::InvalidConfig("no pairs to verify".into()));
    }
    if !(0.0..=1.0).contains(&sample_fraction) {
        return Err(ProtocolError::InvalidConfig(format!(
            "sample fraction {sample_fraction} outside [0, 1]"
        )));
    }
    let k = ((sample_fraction * pairs.len() as f64).ceil() as usize).min(pairs.len());
    let mut sampled = rng.distinct_indices(pairs.len(), k);
    sampled.sort_unstable();
    let mut worst = 1.0f64;
    for &i in &sampled {
        worst = worst.min(ebit_fidelity(&pairs[i])?);
    }
    if worst < 1.0 - EBIT_TOLERANCE {
        return Err(ProtocolError::VerificationAbort { fidelity: worst });
    }
    Ok(pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| sampled.binary_search(i).is_err())
        .map(|(_, p)| p.clone())
        .collect())
}
