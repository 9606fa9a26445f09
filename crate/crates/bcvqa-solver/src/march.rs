//! Steady solves and implicit-Euler time marching.
//!
//! Every step builds the effective problem (source shifted by the previous
//! variational solution over `Δt`), prepares the source circuit, runs a swarm
//! search and polishes with gradient descent. The first step starts from a
//! random swarm (`λ₀ ∈ [0, 1]`, `λ_c ∈ [0, 4π)`); later steps seed one particle
//! with the previous control and use the (shorter) warm-start budget. The
//! finite-difference trajectory is advanced alongside for comparison.

use crate::error::SolverError;
use crate::objective::{
    effective_problem, Control, NeumannMode, Objective, SourceConvention, TermOptions,
};
use crate::optimizer::{gd_minimize, pso_minimize, GdConfig, Observer, PsoConfig, Reporter, Stage};
use crate::stateprep::{FitCache, FitConfig, PrepMethod};
use crate::Result;
use bcvqa_pde::{
    anchor_central_mean, fd_solve_steady, fd_step_transient, l2_error, trace_distance,
    ProblemSpec64,
};
use bcvqa_sim::qnpu::Variant;
use bcvqa_sim::{parameter_count, AnsatzConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Settings of the variational solver.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Trial-state depth `d`.
    pub depth: usize,
    /// Term-circuit choices.
    pub terms: TermOptions,
    /// Boundary-data convention of the source.
    pub source_convention: SourceConvention,
    /// Swarm settings of the first step.
    pub pso: PsoConfig,
    /// Swarm iterations of warm-started steps.
    pub warm_pso_iterations: usize,
    /// Gradient-descent settings.
    pub gd: GdConfig,
    /// Initialization box of `λ₀`.
    pub lambda0_range: (f64, f64),
    /// Central-difference step of the source derivative.
    pub source_step: f64,
    /// Seed of the random generator.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            depth: 1,
            terms: TermOptions::default(),
            source_convention: SourceConvention::GhostElimination,
            pso: PsoConfig::default(),
            warm_pso_iterations: 50,
            gd: GdConfig::default(),
            lambda0_range: (0.0, 1.0),
            source_step: 1e-5,
            seed: 1,
        }
    }
}

impl SolverConfig {
    /// Defaults for an `n`-qubit problem: `𝔭 = 100n` particles.
    pub fn for_qubits(n: usize) -> Self {
        let mut cfg = Self::default();
        cfg.pso.particles = 100 * n;
        cfg
    }

    /// Sets the ghost-weight route.
    pub fn with_neumann_mode(mut self, mode: NeumannMode) -> Self {
        self.terms.neumann_mode = mode;
        self
    }

    /// Sets the circuit variant.
    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.terms.variant = variant;
        self
    }

    /// Sets the preparation method and fitting settings.
    pub fn with_prep(mut self, prep: PrepMethod, fit: FitConfig) -> Self {
        self.terms.prep = prep;
        self.terms.fit = fit;
        self
    }

    /// Checks the optimizer settings.
    pub fn validate(&self) -> Result<()> {
        self.pso.validate()?;
        self.gd.validate()?;
        if self.depth == 0 {
            return Err(SolverError::InvalidConfig(
                "ansatz depth must be at least 1".into(),
            ));
        }
        if !(self.source_step > 0.0) {
            return Err(SolverError::InvalidConfig(
                "source_step must be positive".into(),
            ));
        }
        let (lo, hi) = self.lambda0_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(SolverError::InvalidConfig(
                "lambda0_range must be a finite interval".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one steady solve or time step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    /// 1-based step index (1 for a steady solve).
    pub step: usize,
    /// Physical time `l·Δt` (0 for a steady solve).
    pub time: f64,
    /// Final control.
    pub control: Control,
    /// Reconstructed variational solution (anchored for singular problems).
    pub y_vqa: Vec<f64>,
    /// Finite-difference reference.
    pub y_fd: Vec<f64>,
    /// Final objective value.
    pub objective: f64,
    /// `ε_l2` against the reference.
    pub l2: f64,
    /// `ε_tr` against the reference (`None` if either vector vanishes).
    pub trace: Option<f64>,
    /// Swarm iterations.
    pub pso_iterations: usize,
    /// Gradient-descent iterations.
    pub gd_iterations: usize,
    /// Whether gradient descent met its criterion.
    pub gd_converged: bool,
    /// Worst residual of the preparation circuits.
    pub prep_residual: f64,
}

/// A complete run.
#[derive(Clone, Debug, PartialEq)]
pub struct MarchResult {
    /// Per-step records.
    pub steps: Vec<StepRecord>,
}

impl MarchResult {
    /// Time average of `ε_l2`.
    pub fn mean_l2(&self) -> f64 {
        bcvqa_pde::time_average(&self.steps.iter().map(|s| s.l2).collect::<Vec<_>>())
            .unwrap_or(f64::NAN)
    }

    /// Time average of `ε_tr` over the steps where it is defined.
    pub fn mean_trace(&self) -> Option<f64> {
        let v: Vec<f64> = self.steps.iter().filter_map(|s| s.trace).collect();
        bcvqa_pde::time_average(&v).ok()
    }
}

/// Outcome of one swarm-plus-descent minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSolution {
    /// Final control.
    pub control: Control,
    /// Objective value at the final control.
    pub value: f64,
    /// Swarm iterations.
    pub pso_iterations: usize,
    /// Gradient-descent iterations.
    pub gd_iterations: usize,
    /// Whether gradient descent met its criterion.
    pub gd_converged: bool,
}

/// Solver state shared across steps.
pub struct Session<'a> {
    cfg: SolverConfig,
    rng: ChaCha8Rng,
    cache: Option<&'a mut FitCache>,
    observer: Option<Observer<'a>>,
}

impl<'a> Session<'a> {
    /// New session seeded from `cfg.seed`.
    pub fn new(
        mut cfg: SolverConfig,
        cache: Option<&'a mut FitCache>,
        observer: Option<Observer<'a>>,
    ) -> Result<Self> {
        cfg.validate()?;
        cfg.terms.fit.seed = cfg.seed;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Self {
            cfg,
            rng,
            cache,
            observer,
        })
    }

    fn reporter(&self, stage: Stage, step: usize) -> Reporter<'a> {
        Reporter {
            stage,
            step,
            observer: self.observer,
        }
    }

    /// Builds the objective of one step.
    pub fn objective(
        &mut self,
        problem: &ProblemSpec64,
        prev: Option<(&[f64], f64)>,
        step: usize,
    ) -> Result<Objective> {
        let eff = effective_problem(problem, prev, self.cfg.source_convention, 1.0)?;
        let report = self.reporter(Stage::FitPso, step);
        let mut obj = Objective::build(
            eff,
            self.cfg.depth,
            &self.cfg.terms,
            self.cache.as_deref_mut(),
            report,
        )
        .map_err(|e| match e {
            SolverError::Sim(_) | SolverError::Pde(_) | SolverError::InvalidConfig(_) => e,
            other => SolverError::StatePrep {
                step,
                message: other.to_string(),
            },
        })?;
        obj.source_step = self.cfg.source_step;
        Ok(obj)
    }

    /// Minimizes one objective, optionally warm-started from `seed`.
    pub fn minimize(
        &mut self,
        obj: &Objective,
        seed: Option<&Control>,
        step: usize,
    ) -> Result<StepSolution> {
        let c = obj.parameter_count();
        let mut bounds = vec![self.cfg.lambda0_range];
        bounds.extend(std::iter::repeat((0.0, 4.0 * PI)).take(c));
        let mut pso = self.cfg.pso.clone();
        if seed.is_some() {
            pso.max_iterations = self.cfg.warm_pso_iterations;
        }
        let seed_vec = seed.map(Control::to_vec);
        let report = self.reporter(Stage::Pso, step);
        let swarm = pso_minimize(
            |x| obj.value_flat(x),
            &bounds,
            seed_vec.as_deref(),
            &pso,
            &mut self.rng,
            report,
        )?;
        // Descend in λ₀ units relative to the swarm result so that the scale
        // and the angles are equally well conditioned.
        let unit = if swarm.best[0].abs() > 1e-12 {
            swarm.best[0].abs()
        } else {
            1.0
        };
        let unscale = |z: &[f64]| {
            let mut x = z.to_vec();
            x[0] *= unit;
            x
        };
        let mut start = swarm.best.clone();
        start[0] /= unit;
        let gd = gd_minimize(
            |z| obj.value_flat(&unscale(z)),
            |z| {
                let mut g = obj.gradient(&Control::from_slice(&unscale(z)))?;
                g[0] *= unit;
                Ok(g)
            },
            &start,
            &self.cfg.gd,
            self.reporter(Stage::Gd, step),
        )?;
        let x = unscale(&gd.x);
        Ok(StepSolution {
            control: Control::from_slice(&x),
            value: gd.value,
            pso_iterations: swarm.iterations,
            gd_iterations: gd.iterations,
            gd_converged: gd.converged,
        })
    }
}

fn compare(y_vqa: &[f64], y_fd: &[f64]) -> Result<(f64, Option<f64>)> {
    Ok((l2_error(y_fd, y_vqa)?, trace_distance(y_fd, y_vqa).ok()))
}

/// Solves a steady problem once (one step without the `1/Δt` shift).
pub fn solve_steady(
    problem: &ProblemSpec64,
    cfg: SolverConfig,
    cache: Option<&mut FitCache>,
    observer: Option<Observer<'_>>,
) -> Result<StepRecord> {
    let mut session = Session::new(cfg, cache, observer)?;
    let obj = session.objective(problem, None, 1)?;
    let StepSolution {
        control,
        value: objective,
        pso_iterations,
        gd_iterations,
        gd_converged,
    } = session.minimize(&obj, None, 1)?;
    let mut y_vqa = obj.solution(&control)?;
    let singular = problem.system(None)?.singular;
    if singular {
        y_vqa = anchor_central_mean(&y_vqa)?;
    }
    let y_fd = fd_solve_steady(problem)?;
    let (l2, trace) = compare(&y_vqa, &y_fd)?;
    Ok(StepRecord {
        step: 1,
        time: 0.0,
        control,
        y_vqa,
        y_fd,
        objective,
        l2,
        trace,
        pso_iterations,
        gd_iterations,
        gd_converged,
        prep_residual: obj.terms.prep_residual,
    })
}

/// Runs all implicit Euler steps of a transient problem; steady problems are
/// solved once.
pub fn time_march(
    problem: &ProblemSpec64,
    cfg: SolverConfig,
    cache: Option<&mut FitCache>,
    observer: Option<Observer<'_>>,
) -> Result<MarchResult> {
    problem.validate()?;
    let (Some(time), Some(initial)) = (&problem.time, &problem.initial) else {
        return Ok(MarchResult {
            steps: vec![solve_steady(problem, cfg, cache, observer)?],
        });
    };
    let mut session = Session::new(cfg, cache, observer)?;
    let mut y_vqa = initial.clone();
    let mut y_fd = initial.clone();
    let mut prev_control: Option<Control> = None;
    let mut steps = Vec::with_capacity(time.steps);
    for l in 1..=time.steps {
        let obj = session.objective(problem, Some((&y_vqa, time.dt)), l)?;
        let StepSolution {
            control,
            value: objective,
            pso_iterations,
            gd_iterations,
            gd_converged,
        } = session.minimize(&obj, prev_control.as_ref(), l)?;
        y_vqa = obj.solution(&control)?;
        y_fd = fd_step_transient(problem, &y_fd, time.dt)?;
        let (l2, trace) = compare(&y_vqa, &y_fd)?;
        steps.push(StepRecord {
            step: l,
            time: l as f64 * time.dt,
            control: control.clone(),
            y_vqa: y_vqa.clone(),
            y_fd: y_fd.clone(),
            objective,
            l2,
            trace,
            pso_iterations,
            gd_iterations,
            gd_converged,
            prep_residual: obj.terms.prep_residual,
        });
        prev_control = Some(control);
    }
    Ok(MarchResult { steps })
}

/// Parameter count of a `depth`-layer trial state on `n` qubits.
pub fn control_size(n: usize, depth: usize) -> Result<usize> {
    Ok(parameter_count(&AnsatzConfig::new(n, depth)?) + 1)
}
