use thiserror::Error;

/// Failures of the state-level numeric core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state norm {0} deviates from 1")]
    NotNormalized(f64),
    #[error("{0} qubits exceeds the dense-simulation cap of {max}", max = crate::qcore::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("expected a {expected}-qubit operand, got {actual}")]
    QubitCount { expected: usize, actual: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("target qubits must be distinct")]
    DuplicateTarget,
    #[error("keep set must be a non-empty list of distinct qubits")]
    InvalidKeepSet,
    #[error("operator is not unitary (deviation {0})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(f64),
    #[error("trace {0} deviates from 1")]
    BadTrace(f64),
    #[error("matrix has negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Failures of the GF(2) code machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("generator rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("word is not a codeword")]
    NotACodeword,
    #[error("code pair violates the containment constraint: {0}")]
    Containment(&'static str),
    #[error("codes have different block lengths ({0} vs {1})")]
    BlockLength(usize, usize),
    #[error("block length {0} too large for exhaustive tables")]
    TooLarge(usize),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("malformed code text: {0}")]
    Parse(String),
}

/// Session-level failures of the simulated protocols.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    /// The error marker ⊥: check-bit error rate over threshold.
    #[error("session aborted: check-bit error rate {error_rate:.4} above threshold {threshold:.4}")]
    Abort { error_rate: f64, threshold: f64 },
    #[error("fewer than {needed} sifted bits after {attempts} attempts")]
    SiftShortfall { needed: usize, attempts: usize },
    #[error("MAC verification failed")]
    Reject,
    #[error("covert schedule of {available} slots cannot carry {needed} signals")]
    CovertCapacity { needed: usize, available: usize },
    #[error("distilled {got} ebits, needed {needed}")]
    DistillShortfall { got: usize, needed: usize },
    #[error("ebit verification failed (fidelity {fidelity})")]
    VerificationAbort { fidelity: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Failures of the security-experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("an experiment needs at least {min} trials, got {0}", min = crate::games::MIN_TRIALS)]
    TooFewTrials(u64),
    #[error("protocol has no faking program")]
    NoFakingProgram,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl From<std::convert::Infallible> for ExperimentError {
    fn from(x: std::convert::Infallible) -> Self {
        match x {}
    }
}
