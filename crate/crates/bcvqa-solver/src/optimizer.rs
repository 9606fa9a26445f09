//! Particle-swarm global search and gradient-descent polish.
//!
//! [`pso_minimize`] is a standard global-best swarm (inertia, cognitive and
//! social weights) whose particles are evaluated in parallel; all random draws
//! come from one seeded generator in a fixed order, so results do not depend on
//! the thread count. [`gd_minimize`] is steepest descent with a
//! Barzilai–Borwein trial step and Armijo backtracking; it stops when the change
//! of the gradient between iterations, `‖∇J_i − ∇J_{i−1}‖₂`, drops below
//! `10^{−m}`.

use crate::error::SolverError;
use crate::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

/// Optimization stage reported to observers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Swarm search of the main problem.
    Pso,
    /// Gradient descent of the main problem.
    Gd,
    /// Swarm search while fitting a state-preparation circuit.
    FitPso,
    /// Gradient descent while fitting a state-preparation circuit.
    FitGd,
}

impl Stage {
    /// Lower-case label used in progress lines.
    pub fn label(self) -> &'static str {
        match self {
            Stage::Pso => "pso",
            Stage::Gd => "gd",
            Stage::FitPso => "fit-pso",
            Stage::FitGd => "fit-gd",
        }
    }
}

/// One progress report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProgressEvent {
    /// Reporting stage.
    pub stage: Stage,
    /// 1-based time step (0 outside time marching).
    pub step: usize,
    /// Iteration within the stage.
    pub iteration: usize,
    /// Current (best) objective value.
    pub value: f64,
    /// Gradient change `‖∇J_i − ∇J_{i−1}‖₂` (gradient stages only).
    pub grad_change: Option<f64>,
}

impl fmt::Display for ProgressEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage={} step={} iter={} J={:.16e}",
            self.stage.label(),
            self.step,
            self.iteration,
            self.value
        )?;
        if let Some(ch) = self.grad_change {
            write!(f, " dgrad={ch:.6e}")?;
        }
        Ok(())
    }
}

/// Receiver of progress events.
pub type Observer<'a> = &'a (dyn Fn(&ProgressEvent) + Sync);

/// Where and how an optimizer run reports progress.
#[derive(Clone, Copy)]
pub struct Reporter<'a> {
    /// Stage label of the run.
    pub stage: Stage,
    /// 1-based time step (0 outside time marching).
    pub step: usize,
    /// Event receiver, if any.
    pub observer: Option<Observer<'a>>,
}

impl<'a> Reporter<'a> {
    /// A reporter that discards every event.
    pub fn silent(stage: Stage) -> Self {
        Self {
            stage,
            step: 0,
            observer: None,
        }
    }

    fn emit(&self, every: usize, iteration: usize, value: f64, grad_change: Option<f64>) {
        if let Some(obs) = self.observer {
            if every > 0 && iteration % every == 0 {
                obs(&ProgressEvent {
                    stage: self.stage,
                    step: self.step,
                    iteration,
                    value,
                    grad_change,
                });
            }
        }
    }
}

impl fmt::Debug for Reporter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reporter")
            .field("stage", &self.stage)
            .field("step", &self.step)
            .finish_non_exhaustive()
    }
}

/// Particle-swarm settings.
#[derive(Clone, Debug, PartialEq)]
pub struct PsoConfig {
    /// Number of particles `𝔭 ≥ 1`.
    pub particles: usize,
    /// Iteration budget (0 evaluates the initial swarm only).
    pub max_iterations: usize,
    /// Inertia weight.
    pub inertia: f64,
    /// Attraction to the particle's own best.
    pub cognitive: f64,
    /// Attraction to the swarm's best.
    pub social: f64,
    /// Stop when the best value improved by less than this over `patience` iterations.
    pub tolerance: f64,
    /// Window for the stagnation test.
    pub patience: usize,
    /// Report every this many iterations (0 = never).
    pub log_every: usize,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            particles: 200,
            max_iterations: 1000,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
            tolerance: 1e-3,
            patience: 50,
            log_every: 100,
        }
    }
}

impl PsoConfig {
    /// Checks the invariants (`𝔭 ≥ 1`, positive coefficients).
    pub fn validate(&self) -> Result<()> {
        if self.particles == 0 {
            return Err(SolverError::InvalidConfig(
                "pso.particles must be at least 1".into(),
            ));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SolverError::InvalidConfig(format!(
                    "pso.{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.tolerance >= 0.0) {
            return Err(SolverError::InvalidConfig(
                "pso.tolerance must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a swarm search.
#[derive(Clone, Debug, PartialEq)]
pub struct PsoResult {
    /// Best position found.
    pub best: Vec<f64>,
    /// Objective at `best`.
    pub value: f64,
    /// Iterations performed.
    pub iterations: usize,
    /// Global best after initialization and after every iteration.
    pub history: Vec<f64>,
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

/// Minimizes `f` with a particle swarm initialized uniformly in `bounds`.
///
/// If `seed` is given, particle 0 starts there. Positions are not clamped;
/// velocities are limited to the width of the initialization box.
pub fn pso_minimize<F>(
    f: F,
    bounds: &[(f64, f64)],
    seed: Option<&[f64]>,
    cfg: &PsoConfig,
    rng: &mut ChaCha8Rng,
    report: Reporter<'_>,
) -> Result<PsoResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let dim = bounds.len();
    if let Some(s) = seed {
        if s.len() != dim {
            return Err(SolverError::InvalidConfig(format!(
                "seed has {} coordinates, expected {dim}",
                s.len()
            )));
        }
    }
    let width: Vec<f64> = bounds
        .iter()
        .map(|(lo, hi)| (hi - lo).abs().max(1e-12))
        .collect();
    let mut pos: Vec<Vec<f64>> = (0..cfg.particles)
        .map(|p| match (p, seed) {
            (0, Some(s)) => s.to_vec(),
            _ => bounds
                .iter()
                .map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..hi) } else { lo })
                .collect(),
        })
        .collect();
    let mut vel: Vec<Vec<f64>> = (0..cfg.particles)
        .map(|_| {
            width
                .iter()
                .map(|&w| 0.1 * w * rng.gen_range(-1.0..1.0))
                .collect()
        })
        .collect();
    let mut values: Vec<f64> = pos.par_iter().map(|x| finite_or_inf(f(x))).collect();
    let mut own_best = pos.clone();
    let mut own_value = values.clone();
    let argmin = |v: &[f64]| (0..v.len()).fold(0, |b, i| if v[i] < v[b] { i } else { b });
    let mut g = argmin(&own_value);
    let mut best = own_best[g].clone();
    let mut best_value = own_value[g];
    let mut history = vec![best_value];
    let mut iterations = 0;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        for p in 0..cfg.particles {
            for d in 0..dim {
                let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
                let v = cfg.inertia * vel[p][d]
                    + cfg.cognitive * r1 * (own_best[p][d] - pos[p][d])
                    + cfg.social * r2 * (best[d] - pos[p][d]);
                vel[p][d] = v.clamp(-width[d], width[d]);
                pos[p][d] += vel[p][d];
            }
        }
        values = pos.par_iter().map(|x| finite_or_inf(f(x))).collect();
        for p in 0..cfg.particles {
            if values[p] < own_value[p] {
                own_value[p] = values[p];
                own_best[p].clone_from(&pos[p]);
            }
        }
        g = argmin(&own_value);
        if own_value[g] < best_value {
            best_value = own_value[g];
            best.clone_from(&own_best[g]);
        }
        history.push(best_value);
        report.emit(cfg.log_every, it, best_value, None);
        if cfg.patience > 0 && it >= cfg.patience {
            let old = history[it - cfg.patience];
            if old - best_value <= cfg.tolerance * (1.0 + best_value.abs()) {
                break;
            }
        }
    }
    Ok(PsoResult {
        best,
        value: best_value,
        iterations,
        history,
    })
}

/// Gradient-descent settings.
#[derive(Clone, Debug, PartialEq)]
pub struct GdConfig {
    /// Initial trial step.
    pub step: f64,
    /// Iteration budget.
    pub max_iterations: usize,
    /// Stop when `‖∇J_i − ∇J_{i−1}‖₂ ≤ 10^{−m}`, `m ∈ [3, 7]`.
    pub tolerance_exponent: i32,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Consecutive objective increases treated as divergence.
    pub divergence_window: usize,
    /// Report every this many iterations (0 = never).
    pub log_every: usize,
    /// Descend on `J/|J(start)|` so the stopping rule does not depend on the
    /// magnitude of the objective (ignored when `J(start) = 0`).
    pub normalize: bool,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self {
            step: 0.1,
            max_iterations: 5000,
            tolerance_exponent: 7,
            armijo: 1e-4,
            divergence_window: 50,
            log_every: 500,
            normalize: true,
        }
    }
}

impl GdConfig {
    /// The stopping threshold `10^{−m}`.
    pub fn tolerance(&self) -> f64 {
        10f64.powi(-self.tolerance_exponent)
    }

    /// Checks the invariants.
    pub fn validate(&self) -> Result<()> {
        if !(3..=7).contains(&self.tolerance_exponent) {
            return Err(SolverError::InvalidConfig(format!(
                "gd.tolerance_exponent must be in 3..=7, got {}",
                self.tolerance_exponent
            )));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(SolverError::InvalidConfig(format!(
                "gd.step must be positive, got {}",
                self.step
            )));
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return Err(SolverError::InvalidConfig(format!(
                "gd.armijo must be in (0, 1), got {}",
                self.armijo
            )));
        }
        if self.divergence_window == 0 {
            return Err(SolverError::InvalidConfig(
                "gd.divergence_window must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of gradient descent.
#[derive(Clone, Debug, PartialEq)]
pub struct GdResult {
    /// Final point.
    pub x: Vec<f64>,
    /// Objective at `x`.
    pub value: f64,
    /// Iterations performed.
    pub iterations: usize,
    /// Last gradient change (0 if the start was stationary).
    pub grad_change: f64,
    /// Whether the gradient-change criterion was met.
    pub converged: bool,
    /// Whether the line search could not decrease the objective any further.
    pub stalled: bool,
    /// Objective after every iteration, starting with the initial value.
    pub history: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f` from `start` by steepest descent with Barzilai–Borwein trial
/// steps and Armijo backtracking.
///
/// Fails with [`SolverError::Divergence`] if the objective or gradient becomes
/// non-finite or the objective increases `divergence_window` times in a row.
pub fn gd_minimize<F, G>(
    f: F,
    grad: G,
    start: &[f64],
    cfg: &GdConfig,
    report: Reporter<'_>,
) -> Result<GdResult>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let f0 = f(start);
    let scale = if cfg.normalize && f0.is_finite() && f0 != 0.0 {
        1.0 / f0.abs()
    } else {
        1.0
    };
    let f = |x: &[f64]| scale * f(x);
    let grad =
        |x: &[f64]| -> Result<Vec<f64>> { Ok(grad(x)?.into_iter().map(|v| scale * v).collect()) };
    let tol = cfg.tolerance();
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut g = grad(&x)?;
    let diverged = |iteration, value: f64, detail: &str| SolverError::Divergence {
        iteration,
        value: value / scale,
        detail: detail.into(),
    };
    if !fx.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(diverged(
            0,
            fx,
            "non-finite objective or gradient at the start",
        ));
    }
    let mut history = vec![fx];
    let mut result = GdResult {
        x: x.clone(),
        value: fx,
        iterations: 0,
        grad_change: 0.0,
        converged: true,
        stalled: false,
        history: Vec::new(),
    };
    if norm(&g) == 0.0 {
        result.value = fx / scale;
        result.history = vec![fx / scale];
        return Ok(result);
    }
    let mut alpha = cfg.step;
    let mut increases = 0;
    let mut converged = false;
    let mut stalled = false;
    let mut ch = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        let g2 = dot(&g, &g);
        let mut trial = alpha;
        let mut accepted = None;
        for _ in 0..80 {
            let xn: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - trial * b).collect();
            let fxn = f(&xn);
            if fxn.is_finite() && fxn <= fx - cfg.armijo * trial * g2 {
                accepted = Some((xn, fxn));
                break;
            }
            trial *= 0.5;
        }
        let Some((xn, fxn)) = accepted else {
            stalled = true;
            break;
        };
        increases = if fxn > fx { increases + 1 } else { 0 };
        if increases >= cfg.divergence_window {
            return Err(diverged(
                it,
                fxn,
                "objective increased in every step of the divergence window",
            ));
        }
        let gn = grad(&xn)?;
        if gn.iter().any(|v| !v.is_finite()) {
            return Err(diverged(it, fxn, "non-finite gradient"));
        }
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        ch = norm(&y);
        let sy = dot(&s, &y);
        alpha = if sy > 0.0 {
            (dot(&s, &s) / sy).clamp(1e-12, 1e6)
        } else {
            (trial * 2.0).min(1e6)
        };
        x = xn;
        fx = fxn;
        g = gn;
        history.push(fx);
        report.emit(cfg.log_every, it, fx / scale, Some(ch));
        if ch <= tol {
            converged = true;
            break;
        }
    }
    history.iter_mut().for_each(|h| *h /= scale);
    Ok(GdResult {
        x,
        value: fx / scale,
        iterations,
        grad_change: ch,
        converged,
        stalled,
        history,
    })
}
