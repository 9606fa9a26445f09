//! Error type of the simulator crate.

use thiserror::Error;

/// Failures raised while building or applying circuits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// A gate references a qubit outside the register.
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    /// A gate uses the same qubit twice (as target and control, or twice as control).
    #[error("qubit {0} appears more than once in a single gate")]
    OverlappingQubits(usize),
    /// A gate has the wrong number of targets or controls for its kind.
    #[error("gate {kind} expects {expected}, got {got}")]
    Arity {
        kind: String,
        expected: String,
        got: String,
    },
    /// A kind cannot be turned into a fixed-size matrix (e.g. arity-dependent kinds).
    #[error("unsupported gate kind for this operation: {0}")]
    UnsupportedKind(String),
    /// Dense matrix construction was requested for too many qubits.
    #[error("{n_qubits}-qubit register exceeds the dense-matrix cap of {cap} qubits")]
    MatrixCapExceeded { n_qubits: usize, cap: usize },
    /// An amplitude vector whose length is not a power of two.
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    /// Two objects that must share a register size do not.
    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitCountMismatch { expected: usize, got: usize },
    /// Wrong number of rotation parameters.
    #[error("wrong parameter count: expected {expected}, got {got}")]
    ParameterCount { expected: usize, got: usize },
    /// A size argument outside the supported range.
    #[error("invalid size: {0}")]
    InvalidSize(String),
    /// Not enough carry qubits to decompose a multi-controlled gate.
    #[error("insufficient carry qubits: need {need}, have {have}")]
    InsufficientCarries { need: usize, have: usize },
    /// Normalization of a zero vector.
    #[error("zero-norm state cannot be normalized")]
    ZeroNorm,
    /// Auxiliary (carry / register) qubits were not returned to |0⟩.
    #[error("auxiliary qubits not restored to |0>: leaked weight {0:e}")]
    AuxiliaryLeak(f64),
}
