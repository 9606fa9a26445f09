//! Statevector emulation of variational circuits for boundary-corrected PDE solvers.
//!
//! The crate provides the quantum side of the solver stack:
//!
//! * [`state`] — a dense complex statevector in little-endian ordering (qubit 0 is
//!   the least significant bit of the basis index) with exact ancilla read-out;
//! * [`gate`] and [`circuit`] — gate kinds, their matrices and ordered circuits;
//! * [`ansatz`] — the SO4 bricklayer trial-state circuit `U(λ_c)`;
//! * [`qnpu`] — the term circuits (cyclic-shift adder, boundary corrections,
//!   permutation transform, potential and source units) in deep and carry-qubit
//!   variants;
//! * [`decompose`] and [`census`] — multi-controlled gate decompositions and gate
//!   counting for complexity studies.
//!
//! Numeric kernels are generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix the double-precision instantiation used
//! throughout the solver.

pub mod ansatz;
pub mod census;
pub mod circuit;
pub mod decompose;
pub mod error;
pub mod gate;
pub mod matrix;
pub mod qnpu;
pub mod scalar;
pub mod state;

pub use ansatz::{build_ansatz, parameter_count, so4_block, AnsatzConfig};
pub use census::{gate_census, GateCensus};
pub use circuit::{circuit_to_matrix, Circuit, DEFAULT_MATRIX_CAP};
pub use error::SimError;
pub use gate::{gate_matrix, GateKind, GateOp};
pub use matrix::CMatrix;
pub use scalar::Real;
pub use state::Statevector;

/// Complex scalar used by the double-precision instantiation.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision statevector.
pub type Statevector64 = Statevector<f64>;
/// Single-precision statevector.
pub type Statevector32 = Statevector<f32>;
/// Double-precision dense complex matrix.
pub type CMatrix64 = CMatrix<f64>;

/// Result alias for simulator operations.
pub type Result<T, E = SimError> = std::result::Result<T, E>;
