//! Dense few-qubit quantum states.
//!
//! Everything here is generic over the real scalar ([`Scalar`]); the crate
//! root re-exports `f64` aliases. Operations are pure: randomness comes only
//! from an explicit [`RandomStream`], one uniform draw per measurement.

mod density;
mod eigen;
mod matrix;
mod state;

use serde::{Deserialize, Serialize};

pub use density::DensityMatrix;
pub use eigen::hermitian_eigenvalues;
pub use matrix::{gates, Matrix};
pub use state::StateVector;

use crate::error::QuantumError;
use crate::games::RandomStream;
use crate::scalar::Scalar;

/// Hard cap on dense simulation size.
pub const MAX_QUBITS: usize = 12;

pub(crate) fn check_qubits(n: usize) -> Result<(), QuantumError> {
    if n > MAX_QUBITS {
        Err(QuantumError::TooManyQubits(n))
    } else {
        Ok(())
    }
}

/// BB84 measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `(+)`: `{|0⟩, |1⟩}`
    Computational,
    /// `(×)`: `{|+⟩, |−⟩}`
    Diagonal,
}

impl Basis {
    /// Basis selected by a basis bit (0 → `+`, 1 → `×`).
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Basis::Diagonal
        } else {
            Basis::Computational
        }
    }

    pub fn bit(self) -> bool {
        self == Basis::Diagonal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];
}

/// One-qubit BB84 state encoding `bit` in `basis`.
pub fn prepare_bb84<T: Scalar>(bit: bool, basis: Basis) -> StateVector<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps: [f64; 2] = match (basis, bit) {
        (Basis::Computational, false) => [1.0, 0.0],
        (Basis::Computational, true) => [0.0, 1.0],
        (Basis::Diagonal, false) => [h, h],
        (Basis::Diagonal, true) => [h, -h],
    };
    StateVector::from_real(&amps).expect("BB84 states are normalized")
}

/// Measures a single-qubit state; the returned state is the exact eigenstate.
pub fn measure<T: Scalar>(
    state: &StateVector<T>,
    basis: Basis,
    rng: &mut RandomStream,
) -> Result<(bool, StateVector<T>), QuantumError> {
    if state.n_qubits() != 1 {
        return Err(QuantumError::QubitCount {
            expected: 1,
            actual: state.n_qubits(),
        });
    }
    let [a0, a1] = [state.amplitudes()[0], state.amplitudes()[1]];
    let p0 = match basis {
        Basis::Computational => a0.norm_sqr(),
        Basis::Diagonal => (a0 + a1).norm_sqr() * T::lit(0.5),
    };
    let bit = T::lit(rng.uniform()) >= p0;
    Ok((bit, prepare_bb84(bit, basis)))
}

pub fn measure_subsystem<T: Scalar>(
    state: &StateVector<T>,
    qubit_index: usize,
    basis: Basis,
    rng: &mut RandomStream,
) -> Result<(bool, StateVector<T>), QuantumError> {
    state.measure_qubit(qubit_index, basis, rng)
}

/// Kronecker product for states and density matrices.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError>;
}

impl<T: Scalar> Tensor for StateVector<T> {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        StateVector::tensor(self, other)
    }
}

impl<T: Scalar> Tensor for DensityMatrix<T> {
    fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        DensityMatrix::tensor(self, other)
    }
}

pub fn tensor<K: Tensor>(a: &K, b: &K) -> Result<K, QuantumError> {
    a.tensor(b)
}

pub fn partial_trace<T: Scalar>(
    rho: &DensityMatrix<T>,
    keep: &[usize],
) -> Result<DensityMatrix<T>, QuantumError> {
    rho.partial_trace(keep)
}

/// `F(|ψ⟩, ρ) = ⟨ψ|ρ|ψ⟩`.
pub fn fidelity<T: Scalar>(psi: &StateVector<T>, rho: &DensityMatrix<T>) -> Result<T, QuantumError> {
    rho.expectation(psi)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy<T: Scalar>(rho: &DensityMatrix<T>) -> T {
    rho.entropy_bits()
}

pub fn bell_state<T: Scalar>(kind: BellKind) -> StateVector<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps: [f64; 4] = match kind {
        BellKind::PhiPlus => [h, 0.0, 0.0, h],
        BellKind::PhiMinus => [h, 0.0, 0.0, -h],
        BellKind::PsiPlus => [0.0, h, h, 0.0],
        BellKind::PsiMinus => [0.0, h, -h, 0.0],
    };
    StateVector::from_real(&amps).expect("Bell states are normalized")
}

pub fn apply_unitary<T: Scalar>(
    state: &StateVector<T>,
    unitary: &Matrix<T>,
    targets: &[usize],
) -> Result<StateVector<T>, QuantumError> {
    state.apply_unitary(unitary, targets)
}

/// Binary entropy `H₂(p)` in bits.
pub fn binary_entropy<T: Scalar>(p: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.log2() } else { T::zero() };
    term(p) + term(T::one() - p)
}

#[cfg(test)]
pub(crate) fn c<T: Scalar>(re: f64, im: f64) -> num_complex::Complex<T> {
    num_complex::Complex::new(T::lit(re), T::lit(im))
}
