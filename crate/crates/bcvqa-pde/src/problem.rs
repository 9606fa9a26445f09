//! Problem specification and the boundary-corrected linear system.
//!
//! After ghost-point elimination the discrete problem on the interior nodes
//! reads `A y = rhs` with
//!
//! ```text
//! A   = (ν/Δx²)·L + diag(r)
//! L   = tridiag(−1, 2, −1), L₀₀ = 2 − a_L, L_{N−1,N−1} = 2 − a_R   (ghost relations)
//!       or the cyclic stencil with corners −1 (periodic)
//! r_k = −ζ·p_k                  (steady)
//!     = 1/Δt − ζ·p_k            (one implicit Euler step)
//! rhs = f (+ y_prev/Δt) + (ν/Δx²)·(b_L·e₁ + b_R·e_N)
//! ```
//!
//! so `A` is symmetric whenever the reaction is, and positive definite for the
//! diffusion-dominated problems considered here.

use crate::boundary::{BoundarySpec, GhostRelation};
use crate::error::PdeError;
use crate::Result;
use bcvqa_sim::Real;

/// Time stepping of a transient problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSpec<T> {
    /// Step size `Δt > 0`.
    pub dt: T,
    /// Number of implicit Euler steps.
    pub steps: usize,
}

/// A reaction/diffusion problem on `N_p = 2^n` interior nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec<T> {
    /// Diffusion coefficient `ν > 0`.
    pub nu: T,
    /// Reaction coupling `ζ` multiplying the potential.
    pub zeta: T,
    /// Potential `p_k` at the interior nodes (length `N_p`).
    pub potential: Vec<T>,
    /// Source `f_k` at the interior nodes (length `N_p`).
    pub source: Vec<T>,
    /// Register size `n`; `N_p = 2^n`.
    pub n_qubits: usize,
    /// Boundary conditions.
    pub boundary: BoundarySpec<T>,
    /// Time stepping; `None` for a steady problem.
    pub time: Option<TimeSpec<T>>,
    /// Initial interior values of a transient problem (length `N_p`).
    pub initial: Option<Vec<T>>,
}

/// The assembled (possibly cyclic) tridiagonal system `A y = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T> {
    /// Sub-diagonal, `lower[k]` couples row `k + 1` to column `k` (length `N − 1`).
    pub lower: Vec<T>,
    /// Main diagonal (length `N`).
    pub diag: Vec<T>,
    /// Super-diagonal, `upper[k]` couples row `k` to column `k + 1` (length `N − 1`).
    pub upper: Vec<T>,
    /// Periodic corner entries `A[0][N−1]` and `A[N−1][0]` (zero otherwise).
    pub corner: T,
    /// Right-hand side.
    pub rhs: Vec<T>,
    /// Whether `A` is singular up to rounding (pure Neumann or periodic without reaction).
    pub singular: bool,
}

impl<T: Real> LinearSystem<T> {
    /// Number of unknowns.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Whether the system has no unknowns.
    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Dense row-major copy of `A`.
    pub fn dense(&self) -> Vec<Vec<T>> {
        let n = self.len();
        let mut a = vec![vec![T::zero(); n]; n];
        for k in 0..n {
            a[k][k] = self.diag[k];
            if k + 1 < n {
                a[k][k + 1] = a[k][k + 1] + self.upper[k];
                a[k + 1][k] = a[k + 1][k] + self.lower[k];
            }
        }
        if n > 1 && self.corner != T::zero() {
            a[0][n - 1] = a[0][n - 1] + self.corner;
            a[n - 1][0] = a[n - 1][0] + self.corner;
        }
        a
    }

    /// `A·y`.
    pub fn apply(&self, y: &[T]) -> Result<Vec<T>> {
        let n = self.len();
        if y.len() != n {
            return Err(PdeError::LengthMismatch {
                expected: n,
                got: y.len(),
            });
        }
        Ok(self
            .dense()
            .iter()
            .map(|row| row.iter().zip(y).fold(T::zero(), |s, (&a, &v)| s + a * v))
            .collect())
    }
}

/// Interior node positions `x_k = k·Δx`, `k = 1..=n_points`, `Δx = 1/(n_points + 1)`.
pub fn grid<T: Real>(n_points: usize) -> Vec<T> {
    let dx = T::one() / T::of((n_points + 1) as f64);
    (1..=n_points).map(|k| T::of(k as f64) * dx).collect()
}

/// Samples `f` on the interior nodes.
pub fn sample<T: Real>(n_points: usize, f: impl Fn(T) -> T) -> Vec<T> {
    grid(n_points).into_iter().map(f).collect()
}

impl<T: Real> ProblemSpec<T> {
    /// Steady problem with zero potential and the given source.
    pub fn steady(n_qubits: usize, nu: T, source: Vec<T>, boundary: BoundarySpec<T>) -> Self {
        let n = 1usize << n_qubits;
        Self {
            nu,
            zeta: T::zero(),
            potential: vec![T::zero(); n],
            source,
            n_qubits,
            boundary,
            time: None,
            initial: None,
        }
    }

    /// Transient problem with zero potential.
    pub fn transient(
        n_qubits: usize,
        nu: T,
        source: Vec<T>,
        boundary: BoundarySpec<T>,
        time: TimeSpec<T>,
        initial: Vec<T>,
    ) -> Self {
        Self {
            time: Some(time),
            initial: Some(initial),
            ..Self::steady(n_qubits, nu, source, boundary)
        }
    }

    /// Number of interior nodes `N_p = 2^n`.
    pub fn n_points(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Grid spacing `Δx = 1/(N_p + 1)`.
    pub fn dx(&self) -> T {
        T::one() / T::of((self.n_points() + 1) as f64)
    }

    /// Diffusion scale `ν/Δx²`.
    pub fn stiffness(&self) -> T {
        let dx = self.dx();
        self.nu / (dx * dx)
    }

    /// Interior node positions.
    pub fn grid(&self) -> Vec<T> {
        grid(self.n_points())
    }

    /// Whether the problem is time dependent.
    pub fn is_transient(&self) -> bool {
        self.time.is_some()
    }

    /// Checks sizes, signs and boundary consistency.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(PdeError::InvalidProblem(m));
        if self.n_qubits < 1 || self.n_qubits > 20 {
            return bad(format!("n_qubits must be in 1..=20, got {}", self.n_qubits));
        }
        if !(self.nu > T::zero()) || !self.nu.is_finite() {
            return bad(format!(
                "diffusion coefficient must be positive, got {}",
                self.nu
            ));
        }
        if !self.zeta.is_finite() {
            return bad("reaction coupling must be finite".into());
        }
        let n = self.n_points();
        for (name, v) in [("potential", &self.potential), ("source", &self.source)] {
            if v.len() != n {
                return bad(format!("{name} has {} values, expected {n}", v.len()));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return bad(format!("{name} contains non-finite values"));
            }
        }
        self.boundary.validate()?;
        self.boundary.ghosts(self.dx())?;
        if let Some(t) = &self.time {
            if !(t.dt > T::zero()) || !t.dt.is_finite() {
                return bad(format!("time step must be positive, got {}", t.dt));
            }
            match &self.initial {
                Some(y) if y.len() == n => {}
                Some(y) => {
                    return bad(format!(
                        "initial state has {} values, expected {n}",
                        y.len()
                    ))
                }
                None => return bad("transient problem needs an initial state".into()),
            }
        }
        Ok(())
    }

    /// Ghost relations `(left, right)`, `None` when periodic.
    pub fn ghosts(&self) -> Result<Option<(GhostRelation<T>, GhostRelation<T>)>> {
        self.boundary.ghosts(self.dx())
    }

    /// Reaction weights `r_k`: `−ζ·p_k`, plus `1/dt` when `dt` is given.
    pub fn reaction(&self, dt: Option<T>) -> Vec<T> {
        let shift = dt.map_or(T::zero(), |dt| T::one() / dt);
        self.potential
            .iter()
            .map(|&p| shift - self.zeta * p)
            .collect()
    }

    /// Source including the boundary correction `(ν/Δx²)·(b_L e₁ + b_R e_N)`
    /// and, when `prev` is given, the previous time level `y_prev/dt`.
    pub fn effective_source(&self, prev: Option<(&[T], T)>) -> Result<Vec<T>> {
        let n = self.n_points();
        let mut rhs = self.source.clone();
        if let Some((y, dt)) = prev {
            if y.len() != n {
                return Err(PdeError::LengthMismatch {
                    expected: n,
                    got: y.len(),
                });
            }
            for (r, &v) in rhs.iter_mut().zip(y) {
                *r = *r + v / dt;
            }
        }
        if let Some((l, r)) = self.ghosts()? {
            let s = self.stiffness();
            rhs[0] = rhs[0] + s * l.b;
            rhs[n - 1] = rhs[n - 1] + s * r.b;
        }
        Ok(rhs)
    }

    /// Assembles the steady system (`prev = None`) or one implicit Euler step
    /// from `prev = (y_prev, dt)`.
    pub fn system(&self, prev: Option<(&[T], T)>) -> Result<LinearSystem<T>> {
        self.validate()?;
        if let Some((_, dt)) = prev {
            if !(dt > T::zero()) || !dt.is_finite() {
                return Err(PdeError::InvalidProblem(format!(
                    "time step must be positive, got {dt}"
                )));
            }
        }
        let n = self.n_points();
        let s = self.stiffness();
        let two = T::of(2.0);
        let reaction = self.reaction(prev.map(|(_, dt)| dt));
        let mut diag: Vec<T> = reaction.iter().map(|&r| two * s + r).collect();
        let ghosts = self.ghosts()?;
        let mut corner = T::zero();
        let singular_stencil;
        match ghosts {
            Some((l, r)) => {
                diag[0] = diag[0] - s * l.a;
                diag[n - 1] = diag[n - 1] - s * r.a;
                singular_stencil = l.a == T::one() && r.a == T::one();
            }
            None => {
                // With two nodes both neighbours of each node are the other
                // node; the coupling is folded into the off-diagonal below.
                if n > 2 {
                    corner = -s;
                }
                singular_stencil = true;
            }
        }
        let mut off = vec![-s; n - 1];
        if ghosts.is_none() && n == 2 {
            off[0] = -two * s;
        }
        let singular = singular_stencil && reaction.iter().all(|&r| r == T::zero());
        Ok(LinearSystem {
            lower: off.clone(),
            diag,
            upper: off,
            corner,
            rhs: self.effective_source(prev)?,
            singular,
        })
    }

    /// Values at the ghost nodes `(y_0, y_{N+1})` implied by interior values.
    pub fn ghost_values(&self, interior: &[T]) -> Result<(T, T)> {
        let n = self.n_points();
        if interior.len() != n {
            return Err(PdeError::LengthMismatch {
                expected: n,
                got: interior.len(),
            });
        }
        Ok(match self.ghosts()? {
            Some((l, r)) => (l.a * interior[0] + l.b, r.a * interior[n - 1] + r.b),
            None => (interior[n - 1], interior[0]),
        })
    }

    /// Interior values extended by the two ghost values (length `N_p + 2`).
    pub fn full_profile(&self, interior: &[T]) -> Result<Vec<T>> {
        let (g0, g1) = self.ghost_values(interior)?;
        let mut out = Vec::with_capacity(interior.len() + 2);
        out.push(g0);
        out.extend_from_slice(interior);
        out.push(g1);
        Ok(out)
    }
}
