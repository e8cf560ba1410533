use num_complex::Complex;

use super::{check_qubits, eigen::hermitian_eigenvalues, Matrix, StateVector};
use crate::error::QuantumError;
use crate::scalar::Scalar;

/// Mixed state of `n_qubits` qubits: Hermitian, unit trace, positive
/// semidefinite up to tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    matrix: Matrix<T>,
}

/// Slack for the positive-semidefinite check, looser than the scalar tolerance
/// because eigenvalues carry solver error.
fn psd_slack<T: Scalar>() -> T {
    T::lit(1e-10).max(T::tolerance() * T::lit(100.0))
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self, QuantumError> {
        let dim = matrix.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QuantumError::NotPowerOfTwo(dim));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let herm = matrix.hermiticity_defect();
        if herm > T::tolerance() {
            return Err(QuantumError::NotHermitian(herm.to_f64().unwrap_or(f64::NAN)));
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > T::tolerance() {
            return Err(QuantumError::BadTrace(tr.to_f64().unwrap_or(f64::NAN)));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -psd_slack::<T>() {
            return Err(QuantumError::NotPositive(min.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(DensityMatrix { n_qubits, matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector<T>) -> Self {
        DensityMatrix {
            n_qubits: psi.n_qubits(),
            matrix: Matrix::outer(psi.amplitudes(), psi.amplitudes()),
        }
    }

    /// `Σ p_x |ψ_x⟩⟨ψ_x|` over an ensemble of equally sized pure states.
    pub fn from_ensemble(ensemble: &[(T, StateVector<T>)]) -> Result<Self, QuantumError> {
        let first = ensemble.first().ok_or(QuantumError::InvalidKeepSet)?;
        let dim = first.1.dim();
        let mut m = Matrix::zeros(dim);
        for (p, psi) in ensemble {
            if psi.dim() != dim {
                return Err(QuantumError::DimensionMismatch(dim, psi.dim()));
            }
            let outer = Matrix::outer(psi.amplitudes(), psi.amplitudes()).scale(*p);
            m = m.add(&outer);
        }
        Self::new(m)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self, QuantumError> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let p = T::one() / T::from_usize(dim).expect("dimension fits scalar");
        Ok(DensityMatrix {
            n_qubits,
            matrix: Matrix::diagonal(&vec![p; dim]),
        })
    }

    pub fn from_diagonal(probabilities: &[T]) -> Result<Self, QuantumError> {
        Self::new(Matrix::diagonal(probabilities))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        check_qubits(self.n_qubits + other.n_qubits)?;
        Ok(DensityMatrix {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    /// Reduced state on `keep`, with output qubits ordered as listed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self, QuantumError> {
        let n = self.n_qubits;
        if keep.is_empty() {
            return Err(QuantumError::InvalidKeepSet);
        }
        for (i, &q) in keep.iter().enumerate() {
            if q >= n {
                return Err(QuantumError::IndexOutOfRange { index: q, n_qubits: n });
            }
            if keep[..i].contains(&q) {
                return Err(QuantumError::InvalidKeepSet);
            }
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let bit = |q: usize| 1usize << (n - 1 - q);
        let scatter = |sel: &[usize], value: usize| {
            let m = sel.len();
            sel.iter()
                .enumerate()
                .filter(|(j, _)| value >> (m - 1 - j) & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | bit(q))
        };
        let kept_idx: Vec<usize> = (0..1usize << k).map(|v| scatter(keep, v)).collect();
        let traced_idx: Vec<usize> = (0..1usize << traced.len())
            .map(|v| scatter(&traced, v))
            .collect();
        let mut out = Matrix::zeros(1 << k);
        for (i, &ki) in kept_idx.iter().enumerate() {
            for (j, &kj) in kept_idx.iter().enumerate() {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &t in &traced_idx {
                    acc += self.matrix[(ki | t, kj | t)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix { n_qubits: k, matrix: out })
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> T {
        let h = self
            .eigenvalues()
            .into_iter()
            .filter(|&l| l > T::zero())
            .fold(T::zero(), |acc, l| acc - l * l.log2());
        h.max(T::zero())
    }

    /// Trace distance `½ ‖ρ - σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<T, QuantumError> {
        if self.matrix.dim() != other.matrix.dim() {
            return Err(QuantumError::DimensionMismatch(self.matrix.dim(), other.matrix.dim()));
        }
        let diff = self.matrix.sub(&other.matrix);
        let sum = hermitian_eigenvalues(&diff)
            .into_iter()
            .fold(T::zero(), |acc, l| acc + l.abs());
        Ok(sum * T::lit(0.5))
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T, QuantumError> {
        if psi.dim() != self.matrix.dim() {
            return Err(QuantumError::DimensionMismatch(psi.dim(), self.matrix.dim()));
        }
        let rho_psi = self.matrix.apply(psi.amplitudes());
        let val = psi
            .amplitudes()
            .iter()
            .zip(&rho_psi)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
        Ok(val.re)
    }
}
