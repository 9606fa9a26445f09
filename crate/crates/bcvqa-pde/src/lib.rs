//! One-dimensional reaction/diffusion problems on a uniform interior grid.
//!
//! The crate holds everything classical about the model problem
//!
//! ```text
//! ∂y/∂t = ν ∂²y/∂x² + ζ p(x) y + f(x),   x ∈ (0, 1)
//! ```
//!
//! discretized on `N_p = 2^n` interior points `x_k = k·Δx`, `Δx = 1/(N_p + 1)`,
//! with ghost nodes `x_0 = 0` and `x_{N_p+1} = 1` carrying the boundary data:
//!
//! * [`boundary`] — boundary conditions and their ghost-point relations;
//! * [`problem`] — the problem specification and the boundary-corrected stencil;
//! * [`fd`] — the finite-difference reference solver (steady and implicit Euler);
//! * [`metrics`] — error measures between two discrete solutions.
//!
//! Numeric routines are generic over [`Real`]; the `*64` aliases fix `f64`.

pub mod boundary;
pub mod error;
pub mod fd;
pub mod metrics;
pub mod problem;

pub use bcvqa_sim::Real;
pub use boundary::{BoundaryCondition, BoundarySpec, GhostRelation, Side};
pub use error::PdeError;
pub use fd::{
    anchor_central_mean, fd_solve_steady, fd_solve_steady_with, fd_step_transient, fd_transient,
    SingularPolicy,
};
pub use metrics::{l2_error, overlap_distance, time_average, trace_distance};
pub use problem::{grid, sample, LinearSystem, ProblemSpec, TimeSpec};

/// Double-precision boundary specification.
pub type BoundarySpec64 = BoundarySpec<f64>;
/// Double-precision problem specification.
pub type ProblemSpec64 = ProblemSpec<f64>;

/// Result alias for problem and solver operations.
pub type Result<T, E = PdeError> = std::result::Result<T, E>;
