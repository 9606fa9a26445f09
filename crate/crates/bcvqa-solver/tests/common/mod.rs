//! Shared fixtures: the seven n = 2 boundary settings and an independent dense
//! assembly of the boundary-corrected energy.

#![allow(dead_code)]

use bcvqa_pde::{sample, BoundaryCondition, BoundarySpec64, ProblemSpec64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn split(np: usize) -> Vec<f64> {
    sample(np, |x: f64| if x < 0.5 { 1.0 } else { -1.0 })
}

/// Periodic, Dirichlet (homogeneous, inhomogeneous), Neumann (homogeneous,
/// inhomogeneous), mixed Neumann/Dirichlet and Robin settings on 4 points.
pub fn seven_settings() -> Vec<(&'static str, ProblemSpec64)> {
    let ones = vec![1.0; 4];
    vec![
        (
            "periodic",
            ProblemSpec64::steady(2, 1.0, split(4), BoundarySpec64::periodic()),
        ),
        (
            "dirichlet",
            ProblemSpec64::steady(2, 1.0, ones.clone(), BoundarySpec64::dirichlet(0.0, 0.0)),
        ),
        (
            "dirichlet-inh",
            ProblemSpec64::steady(2, 1.0, ones.clone(), BoundarySpec64::dirichlet(0.01, -0.02)),
        ),
        (
            "neumann",
            ProblemSpec64::steady(2, 1.0, split(4), BoundarySpec64::neumann(0.0, 0.0)),
        ),
        (
            "neumann-inh",
            ProblemSpec64::steady(2, 1.0, split(4), BoundarySpec64::neumann(-1.0, -1.0)),
        ),
        (
            "mixed",
            ProblemSpec64::steady(
                2,
                1.0,
                ones.clone(),
                BoundarySpec64 {
                    left: BoundaryCondition::Neumann { gradient: 0.0 },
                    right: BoundaryCondition::Dirichlet { value: 0.0 },
                },
            ),
        ),
        (
            "robin",
            ProblemSpec64::steady(
                2,
                1.0,
                ones,
                BoundarySpec64 {
                    left: BoundaryCondition::Robin {
                        alpha: -1.0,
                        beta: 1.0,
                        gamma: 1.0,
                    },
                    right: BoundaryCondition::Robin {
                        alpha: 1.0,
                        beta: 1.0,
                        gamma: 1.0,
                    },
                },
            ),
        ),
    ]
}

/// Boundary equation `g·y_ghost + h·y_adjacent = rhs` with one-sided slopes.
fn ghost_row(bc: &BoundaryCondition<f64>, left: bool, dx: f64) -> (f64, f64, f64) {
    match *bc {
        BoundaryCondition::Dirichlet { value } => (1.0, 0.0, value),
        BoundaryCondition::Neumann { gradient } => {
            if left {
                (-1.0 / dx, 1.0 / dx, gradient)
            } else {
                (1.0 / dx, -1.0 / dx, gradient)
            }
        }
        BoundaryCondition::Robin { alpha, beta, gamma } => {
            if left {
                (alpha / dx - beta / dx, beta / dx, gamma)
            } else {
                (alpha / dx + beta / dx, -beta / dx, gamma)
            }
        }
        BoundaryCondition::Periodic => unreachable!(),
    }
}

/// Dense `A` and right-hand side `f̃` of the three-point stencil after the
/// ghost values are eliminated from the boundary equations; one implicit Euler
/// step adds `1/Δt` to the diagonal and `y_prev/Δt` to the source.
pub fn dense_system(p: &ProblemSpec64, prev: Option<(&[f64], f64)>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let np = 1usize << p.n_qubits;
    let dx = 1.0 / (np as f64 + 1.0);
    let s = p.nu / (dx * dx);
    let mut a = vec![vec![0.0; np]; np];
    let mut f = p.source.clone();
    for k in 0..np {
        a[k][k] = 2.0 * s - p.zeta * p.potential[k];
        if let Some((y, dt)) = prev {
            a[k][k] += 1.0 / dt;
            f[k] += y[k] / dt;
        }
        let (l, r) = ((k + np - 1) % np, (k + 1) % np);
        if p.boundary.is_periodic() {
            a[k][l] -= s;
            a[k][r] -= s;
        } else {
            if k > 0 {
                a[k][l] -= s;
            }
            if k + 1 < np {
                a[k][r] -= s;
            }
        }
    }
    if !p.boundary.is_periodic() {
        // y_ghost = (rhs − h·y_adj)/g enters row k through the −s coupling.
        let (g, h, rhs) = ghost_row(&p.boundary.left, true, dx);
        a[0][0] += s * h / g;
        f[0] += s * rhs / g;
        let (g, h, rhs) = ghost_row(&p.boundary.right, false, dx);
        a[np - 1][np - 1] += s * h / g;
        f[np - 1] += s * rhs / g;
    }
    (a, f)
}

/// `Δx·(λ₀² uᵀA u − 2λ₀ uᵀf̃)` for a unit vector `u`.
pub fn dense_energy(
    p: &ProblemSpec64,
    prev: Option<(&[f64], f64)>,
    lambda0: f64,
    u: &[f64],
) -> f64 {
    let (a, f) = dense_system(p, prev);
    let dx = 1.0 / (u.len() as f64 + 1.0);
    let quad: f64 = (0..u.len())
        .map(|i| u[i] * (0..u.len()).map(|j| a[i][j] * u[j]).sum::<f64>())
        .sum();
    let lin: f64 = u.iter().zip(&f).map(|(x, y)| x * y).sum();
    dx * (lambda0 * lambda0 * quad - 2.0 * lambda0 * lin)
}

/// Uniform angles in `[0, 4π)`.
pub fn random_params(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| rng.gen_range(0.0..4.0 * std::f64::consts::PI))
        .collect()
}
