use num_complex::Complex;

use super::{check_qubits, gates, Basis, Matrix};
use crate::error::QuantumError;
use crate::games::RandomStream;
use crate::scalar::Scalar;

/// Pure state of `n_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the amplitude index, so `|01⟩`
/// has qubit 0 in `|0⟩` and qubit 1 in `|1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Wraps amplitudes whose squared norm is 1 within the scalar tolerance.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self, QuantumError> {
        let state = Self::unchecked(amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > T::tolerance() {
            return Err(QuantumError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(state)
    }

    /// Wraps amplitudes after rescaling them to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self, QuantumError> {
        let mut state = Self::unchecked(amplitudes)?;
        let norm = state.norm_sqr();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(QuantumError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        let s = T::one() / norm.sqrt();
        for a in &mut state.amplitudes {
            *a = *a * s;
        }
        Ok(state)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self, QuantumError> {
        Self::new(
            amplitudes
                .iter()
                .map(|&x| Complex::new(T::lit(x), T::zero()))
                .collect(),
        )
    }

    fn unchecked(amplitudes: Vec<Complex<T>>) -> Result<Self, QuantumError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QuantumError::NotPowerOfTwo(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QuantumError::IndexOutOfRange { index, n_qubits });
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>, QuantumError> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨self|other⟩|²`, the pure-state fidelity (insensitive to global phase).
    pub fn overlap(&self, other: &Self) -> Result<T, QuantumError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Kronecker product; qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        check_qubits(self.n_qubits + other.n_qubits)?;
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        })
    }

    fn bit_of(&self, qubit: usize) -> usize {
        self.n_qubits - 1 - qubit
    }

    fn check_index(&self, qubit: usize) -> Result<(), QuantumError> {
        if qubit >= self.n_qubits {
            return Err(QuantumError::IndexOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Applies a unitary on `targets`; `targets[0]` is the most significant
    /// qubit of the operator's index.
    pub fn apply_unitary(&self, unitary: &Matrix<T>, targets: &[usize]) -> Result<Self, QuantumError> {
        let k = targets.len();
        if k == 0 || unitary.dim() != 1 << k {
            return Err(QuantumError::DimensionMismatch(unitary.dim(), 1 << k));
        }
        for (i, &t) in targets.iter().enumerate() {
            self.check_index(t)?;
            if targets[..i].contains(&t) {
                return Err(QuantumError::DuplicateTarget);
            }
        }
        let defect = unitary.unitarity_defect();
        if defect > T::lit(1e-10).max(T::tolerance()) {
            return Err(QuantumError::NotUnitary(defect.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(self.apply_unchecked(unitary, targets))
    }

    pub(crate) fn apply_unchecked(&self, unitary: &Matrix<T>, targets: &[usize]) -> Self {
        let k = targets.len();
        let masks: Vec<usize> = targets.iter().map(|&t| 1usize << self.bit_of(t)).collect();
        let target_mask: usize = masks.iter().sum();
        let sub = 1usize << k;
        let mut out = self.amplitudes.clone();
        let mut gathered = vec![Complex::new(T::zero(), T::zero()); sub];
        let mut indices = vec![0usize; sub];
        for base in 0..self.dim() {
            if base & target_mask != 0 {
                continue;
            }
            for (s, idx) in indices.iter_mut().enumerate() {
                let mut full = base;
                for (j, &m) in masks.iter().enumerate() {
                    if s >> (k - 1 - j) & 1 == 1 {
                        full |= m;
                    }
                }
                *idx = full;
                gathered[s] = self.amplitudes[full];
            }
            let mapped = unitary.apply(&gathered);
            for (s, &idx) in indices.iter().enumerate() {
                out[idx] = mapped[s];
            }
        }
        StateVector {
            n_qubits: self.n_qubits,
            amplitudes: out,
        }
    }

    /// Bit flip on one qubit, as an amplitude permutation.
    pub fn apply_x(&self, qubit: usize) -> Result<Self, QuantumError> {
        self.check_index(qubit)?;
        let mask = 1usize << self.bit_of(qubit);
        let amplitudes = (0..self.dim()).map(|i| self.amplitudes[i ^ mask]).collect();
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// Probability that `qubit` reads 1 in the computational basis.
    pub fn prob_one(&self, qubit: usize) -> Result<T, QuantumError> {
        self.check_index(qubit)?;
        let mask = 1usize << self.bit_of(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr()))
    }

    /// Measures one qubit in `basis`, consuming exactly one uniform draw.
    ///
    /// Outcome 0 is returned iff the draw is below the outcome-0 probability.
    /// The remaining state is renormalized.
    pub fn measure_qubit(
        &self,
        qubit: usize,
        basis: Basis,
        rng: &mut RandomStream,
    ) -> Result<(bool, Self), QuantumError> {
        self.check_index(qubit)?;
        let h = gates::hadamard::<T>();
        let rotated = match basis {
            Basis::Computational => self.clone(),
            Basis::Diagonal => self.apply_unchecked(&h, &[qubit]),
        };
        let p1 = rotated.prob_one(qubit)?;
        let p0 = (T::one() - p1).max(T::zero());
        let outcome = T::lit(rng.uniform()) >= p0;
        let collapsed = rotated.project(qubit, outcome)?;
        let back = match basis {
            Basis::Computational => collapsed,
            Basis::Diagonal => collapsed.apply_unchecked(&h, &[qubit]),
        };
        Ok((outcome, back))
    }

    /// Projects `qubit` onto `|value⟩` (computational basis) and renormalizes.
    pub fn project(&self, qubit: usize, value: bool) -> Result<Self, QuantumError> {
        self.check_index(qubit)?;
        let mask = 1usize << self.bit_of(qubit);
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if (i & mask != 0) == value {
                    a
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Self::normalized(amplitudes)
    }

    /// Removes a qubit that is in the computational state `|value⟩`.
    ///
    /// Fails if the qubit is not (within tolerance) in that product state.
    pub fn remove_qubit(&self, qubit: usize, value: bool) -> Result<Self, QuantumError> {
        self.check_index(qubit)?;
        if self.n_qubits == 1 {
            return Err(QuantumError::InvalidKeepSet);
        }
        let bit = self.bit_of(qubit);
        let mask = 1usize << bit;
        let low = mask - 1;
        let kept: Vec<Complex<T>> = (0..self.dim() / 2)
            .map(|r| {
                let full = ((r & !low) << 1) | (r & low) | if value { mask } else { 0 };
                self.amplitudes[full]
            })
            .collect();
        Self::new(kept)
    }

    pub fn to_density(&self) -> super::DensityMatrix<T> {
        super::DensityMatrix::from_pure(self)
    }
}
