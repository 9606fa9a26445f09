//! Finite-difference reference solver.
//!
//! Non-periodic systems are tridiagonal and solved with the Thomas algorithm;
//! periodic corners (or a vanishing Thomas pivot) fall back to dense Gaussian
//! elimination with partial pivoting. Singular systems — pure Neumann or
//! periodic without reaction — are determined only up to a constant; with
//! [`SingularPolicy::CentralMean`] the first equation is replaced by
//! `(y_{N/2−1} + y_{N/2})/2 = 0`, pinning the mean of the two central nodes.

use crate::error::PdeError;
use crate::problem::{LinearSystem, ProblemSpec};
use crate::Result;
use bcvqa_sim::Real;

/// Treatment of systems that determine the solution only up to a constant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SingularPolicy {
    /// Pin the mean of the two central nodes to zero.
    #[default]
    CentralMean,
    /// Report [`PdeError::Singular`].
    Reject,
}

/// Solves a tridiagonal system; `None` if a pivot vanishes.
pub fn thomas<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let n = diag.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut pivot = diag[0];
    if pivot == T::zero() {
        return None;
    }
    if n > 1 {
        c[0] = upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for k in 1..n {
        pivot = diag[k] - lower[k - 1] * c[k - 1];
        if pivot == T::zero() || !pivot.is_finite() {
            return None;
        }
        if k + 1 < n {
            c[k] = upper[k] / pivot;
        }
        d[k] = (rhs[k] - lower[k - 1] * d[k - 1]) / pivot;
    }
    for k in (0..n - 1).rev() {
        d[k] = d[k] - c[k] * d[k + 1];
    }
    Some(d)
}

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    if a.len() != n {
        return Err(PdeError::LengthMismatch {
            expected: n,
            got: a.len(),
        });
    }
    let scale = a.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
    let tiny = scale * T::epsilon() * T::of(n.max(1) as f64);
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if !(a[p][col].abs() > tiny) {
            return Err(PdeError::Singular { row: col });
        }
        a.swap(col, p);
        b.swap(col, p);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(b[row], |s, k| s - a[row][k] * x[k]);
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Solves an assembled system according to `policy`.
pub fn solve_system<T: Real>(sys: &LinearSystem<T>, policy: SingularPolicy) -> Result<Vec<T>> {
    let n = sys.len();
    if sys.singular {
        if policy == SingularPolicy::Reject || n < 2 {
            return Err(PdeError::Singular { row: 0 });
        }
        let mut a = sys.dense();
        let mut b = sys.rhs.clone();
        let half = T::of(0.5);
        a[0] = vec![T::zero(); n];
        a[0][n / 2 - 1] = half;
        a[0][n / 2] = half;
        b[0] = T::zero();
        return dense_solve(a, b);
    }
    if sys.corner == T::zero() {
        if let Some(y) = thomas(&sys.lower, &sys.diag, &sys.upper, &sys.rhs) {
            return Ok(y);
        }
    }
    dense_solve(sys.dense(), sys.rhs.clone())
}

/// Steady solution on the interior nodes, anchoring singular problems at the
/// central mean.
pub fn fd_solve_steady<T: Real>(problem: &ProblemSpec<T>) -> Result<Vec<T>> {
    fd_solve_steady_with(problem, SingularPolicy::CentralMean)
}

/// Steady solution with an explicit singular-system policy.
pub fn fd_solve_steady_with<T: Real>(
    problem: &ProblemSpec<T>,
    policy: SingularPolicy,
) -> Result<Vec<T>> {
    solve_system(&problem.system(None)?, policy)
}

/// One implicit Euler step of size `dt` from `y_prev`.
pub fn fd_step_transient<T: Real>(problem: &ProblemSpec<T>, y_prev: &[T], dt: T) -> Result<Vec<T>> {
    solve_system(&problem.system(Some((y_prev, dt)))?, SingularPolicy::Reject)
}

/// All time levels `y⁰, y¹, …, y^{steps}` of a transient problem.
pub fn fd_transient<T: Real>(problem: &ProblemSpec<T>) -> Result<Vec<Vec<T>>> {
    problem.validate()?;
    let (Some(time), Some(initial)) = (&problem.time, &problem.initial) else {
        return Err(PdeError::InvalidProblem(
            "transient solve needs a time spec and an initial state".into(),
        ));
    };
    let mut levels = Vec::with_capacity(time.steps + 1);
    levels.push(initial.clone());
    for _ in 0..time.steps {
        let next = fd_step_transient(problem, levels.last().expect("non-empty"), time.dt)?;
        levels.push(next);
    }
    Ok(levels)
}

/// Shifts `y` by a constant so that the mean of its two central entries is zero.
pub fn anchor_central_mean<T: Real>(y: &[T]) -> Result<Vec<T>> {
    let n = y.len();
    if n < 2 {
        return Err(PdeError::Empty);
    }
    let mean = (y[n / 2 - 1] + y[n / 2]) * T::of(0.5);
    Ok(y.iter().map(|&v| v - mean).collect())
}
