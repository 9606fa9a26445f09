//! Variational solver for boundary-corrected 1D reaction/diffusion problems.
//!
//! The pieces, in pipeline order:
//!
//! * [`hadamard`] — Hadamard-test assembly of a term circuit with the trial
//!   state, exact ancilla read-out, and the equivalent data-register operator;
//! * [`stateprep`] — circuits preparing normalized source and potential vectors
//!   (fitted bricklayer states or an exact rotation tree), with an on-disk cache;
//! * [`objective`] — the discrete energy `J(λ₀, λ_c)` built from term
//!   expectations, and its gradients (parameter shifts plus central differences);
//! * [`optimizer`] — particle swarm followed by gradient descent;
//! * [`march`] — steady solves and implicit-Euler time marching with warm starts.
//!
//! Everything here runs in double precision.

pub mod error;
pub mod hadamard;
pub mod march;
pub mod objective;
pub mod optimizer;
pub mod stateprep;

pub use error::SolverError;
pub use hadamard::{evaluate_term, CompiledTerm, Layout, TermAssembly, TermCircuit};
pub use march::{
    control_size, solve_steady, time_march, MarchResult, Session, SolverConfig, StepRecord,
    StepSolution,
};
pub use objective::{
    boundary_corrections, effective_problem, Control, EffectiveProblem, NeumannMode, Objective,
    SourceConvention, TermOptions, TermSet, TermValues,
};
pub use optimizer::{
    gd_minimize, pso_minimize, GdConfig, GdResult, ProgressEvent, PsoConfig, PsoResult, Reporter,
    Stage,
};
pub use stateprep::{
    exact_state_circuit, fit_function_gate, function_hash, prepare_state, FitCache, FitConfig,
    FitResult, PrepMethod,
};

/// Result alias for solver operations.
pub type Result<T, E = SolverError> = std::result::Result<T, E>;
