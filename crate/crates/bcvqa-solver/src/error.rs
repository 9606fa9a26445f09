//! Error type of the solver crate.

use bcvqa_pde::PdeError;
use bcvqa_sim::SimError;
use thiserror::Error;

/// Failures of term evaluation, objective assembly, fitting and optimization.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    /// Circuit construction or simulation failed.
    #[error(transparent)]
    Sim(#[from] SimError),
    /// Problem validation or the reference solver failed.
    #[error(transparent)]
    Pde(#[from] PdeError),
    /// A term assembly is inconsistent.
    #[error("invalid term assembly: {0}")]
    InvalidAssembly(String),
    /// An optimizer or fitting configuration is invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// The λ₀ gradient form divides by λ₀, which is zero.
    #[error("scale λ0 is zero; the control must be re-seeded")]
    ZeroScale,
    /// State preparation of an all-zero function was requested.
    #[error("cannot prepare a state from an all-zero function")]
    ZeroFunction,
    /// Gradient descent diverged.
    #[error("divergence at iteration {iteration}: {detail} (J = {value})")]
    Divergence {
        /// Iteration at which divergence was detected.
        iteration: usize,
        /// Objective value at that point.
        value: f64,
        /// Diagnostic message.
        detail: String,
    },
    /// State preparation failed during time marching.
    #[error("state preparation failed at step {step}: {message}")]
    StatePrep {
        /// 1-based time step.
        step: usize,
        /// Cause.
        message: String,
    },
    /// Reading or writing the fit cache failed.
    #[error("fit cache: {0}")]
    Cache(String),
}
