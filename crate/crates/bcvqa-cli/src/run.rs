//! The `run` command: validate a scenario, solve it, write the report files.

use crate::config::{ConfigError, RunPlan, ScenarioConfig};
use crate::report::{fmt17, metrics_csv, solution_csv, StepMetrics};
use bcvqa_pde::{overlap_distance, time_average};
use bcvqa_solver::{time_march, FitCache, MarchResult, ProgressEvent, SolverError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// File names inside the output directory.
pub const SOLUTION_FILE: &str = "solution.csv";
/// Metrics CSV name.
pub const METRICS_FILE: &str = "metrics.csv";
/// Summary name.
pub const SUMMARY_FILE: &str = "summary.toml";

/// Failure of a CLI command, with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// The scenario or a command-line value is invalid (exit code 2).
    Config(ConfigError),
    /// Gradient descent diverged (exit code 3).
    Divergence(SolverError),
    /// Any other solver failure (exit code 1).
    Solver(SolverError),
    /// Reading or writing files failed (exit code 1).
    Io(String),
    /// A self-check failed (exit code 1).
    Check(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Divergence(_) => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "invalid config: {e}"),
            CliError::Divergence(e) => write!(f, "optimizer diverged: {e}"),
            CliError::Solver(e) => write!(f, "solver failed: {e}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Divergence { .. } => CliError::Divergence(e),
            other => CliError::Solver(other),
        }
    }
}

/// `[run]` table of the summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunFacts {
    /// Scenario name.
    pub name: String,
    /// Seed in effect.
    pub seed: u64,
    /// Steps solved (1 for a steady problem).
    pub steps: usize,
    /// Mean `ε_l2` over the steps.
    pub mean_eps_l2: f64,
    /// Mean `ε_tr` over the steps where it is defined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_eps_tr: Option<f64>,
    /// Mean pure-state trace distance over the steps where it is defined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_eps_ov: Option<f64>,
    /// `ε_l2` of the last step.
    pub final_eps_l2: f64,
    /// Objective of the last step.
    pub final_objective: f64,
    /// Swarm iterations summed over the steps.
    pub pso_iterations: usize,
    /// Descent iterations summed over the steps.
    pub gd_iterations: usize,
    /// Whether every descent met its criterion.
    pub gd_converged: bool,
    /// Worst preparation residual.
    pub max_prep_residual: f64,
}

/// Summary file: run facts plus the effective configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Outcome.
    pub run: RunFacts,
    /// Configuration with the effective seed and output directory.
    pub config: ScenarioConfig,
}

/// Everything a finished run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    /// Summary as written.
    pub summary: Summary,
    /// Per-step results.
    pub result: MarchResult,
    /// Per-step error measures.
    pub metrics: Vec<StepMetrics>,
    /// Output directory.
    pub out_dir: PathBuf,
}

fn io_err(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Validates, solves and writes `solution.csv`, `metrics.csv`, `summary.toml`
/// (and the preparation cache). Nothing is written unless the solve succeeds.
/// Progress goes to `progress` as `key=value` lines.
pub fn run_scenario(
    config: &ScenarioConfig,
    seed: Option<u64>,
    out_dir: Option<&Path>,
    progress: &(dyn Fn(&str) + Sync),
) -> Result<RunOutcome, CliError> {
    let RunPlan {
        problem,
        solver,
        out_dir,
        cache_path,
    } = config.build(seed, out_dir)?;
    let seed = solver.seed;
    let mut cache = match &cache_path {
        Some(p) => Some(FitCache::load(p)?),
        None => None,
    };
    progress(&format!(
        "event=start name={} n={} steps={} depth={} particles={} seed={seed}",
        config.output.name,
        problem.n_qubits,
        problem.time.as_ref().map_or(1, |t| t.steps),
        solver.depth,
        solver.pso.particles,
    ));
    let observer = |e: &ProgressEvent| progress(&e.to_string());
    let result = time_march(&problem, solver, cache.as_mut(), Some(&observer))?;

    let mut metrics = Vec::with_capacity(result.steps.len());
    for s in &result.steps {
        let m = StepMetrics {
            l2: s.l2,
            trace: s.trace,
            overlap: overlap_distance(&s.y_fd, &s.y_vqa).ok(),
        };
        progress(&format!(
            "event=step step={} eps_l2={} J={} pso_iter={} gd_iter={}",
            s.step,
            fmt17(m.l2),
            fmt17(s.objective),
            s.pso_iterations,
            s.gd_iterations
        ));
        metrics.push(m);
    }
    let mean = |v: Vec<f64>| time_average(&v).ok();
    let last = result.steps.last().expect("at least one step");
    let mut effective = config.clone();
    effective.pso.seed = seed;
    effective.output.dir = out_dir.display().to_string();
    let summary = Summary {
        run: RunFacts {
            name: config.output.name.clone(),
            seed,
            steps: result.steps.len(),
            mean_eps_l2: result.mean_l2(),
            mean_eps_tr: result.mean_trace(),
            mean_eps_ov: mean(metrics.iter().filter_map(|m| m.overlap).collect()),
            final_eps_l2: last.l2,
            final_objective: last.objective,
            pso_iterations: result.steps.iter().map(|s| s.pso_iterations).sum(),
            gd_iterations: result.steps.iter().map(|s| s.gd_iterations).sum(),
            gd_converged: result.steps.iter().all(|s| s.gd_converged),
            max_prep_residual: result
                .steps
                .iter()
                .map(|s| s.prep_residual)
                .fold(0.0, f64::max),
        },
        config: effective,
    };

    std::fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;
    write(
        &out_dir.join(SOLUTION_FILE),
        &solution_csv(&result, &problem.grid(), problem.initial.as_deref()),
    )?;
    write(&out_dir.join(METRICS_FILE), &metrics_csv(&result, &metrics))?;
    let text = toml::to_string(&summary).map_err(|e| CliError::Io(e.to_string()))?;
    write(&out_dir.join(SUMMARY_FILE), &text)?;
    if let (Some(c), Some(p)) = (&cache, &cache_path) {
        c.save(p)?;
    }
    progress(&format!(
        "event=done name={} mean_eps_l2={} out_dir={}",
        summary.run.name,
        fmt17(summary.run.mean_eps_l2),
        out_dir.display()
    ));
    Ok(RunOutcome {
        summary,
        result,
        metrics,
        out_dir,
    })
}
