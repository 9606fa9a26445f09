//! Scenario files: TOML with the sections `problem`, `boundary`, `ansatz`,
//! `pso`, `gd` and `output`.
//!
//! Parsing is strict (unknown keys are errors) and [`ScenarioConfig::build`]
//! validates every value before anything runs, reporting the offending field.

use crate::funcspec::FunctionSpec;
use bcvqa_pde::{BoundaryCondition, BoundarySpec64, ProblemSpec64, Side, TimeSpec};
use bcvqa_sim::qnpu::Variant;
use bcvqa_solver::{
    FitConfig, GdConfig, Layout, NeumannMode, PrepMethod, PsoConfig, SolverConfig,
    SourceConvention, TermOptions,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Largest register accepted by the runner.
pub const MAX_QUBITS: usize = 10;

/// A rejected configuration value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    /// Dotted path of the offending field (`boundary.left`, `pso.particles`, …).
    pub field: String,
    /// What is wrong with it.
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// A complete scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Problem data.
    pub problem: ProblemSection,
    /// Boundary conditions.
    pub boundary: BoundarySection,
    /// Trial state and term circuits.
    #[serde(default)]
    pub ansatz: AnsatzSection,
    /// Particle swarm.
    #[serde(default)]
    pub pso: PsoSection,
    /// Gradient descent.
    #[serde(default)]
    pub gd: GdSection,
    /// Output files.
    #[serde(default)]
    pub output: OutputSection,
}

fn one() -> f64 {
    1.0
}

fn zero_fn() -> FunctionSpec {
    "0".parse().expect("constant spec")
}

/// `[problem]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// Register size `n` (`N_p = 2^n` grid points).
    pub n: usize,
    /// Diffusion coefficient `ν`.
    #[serde(default = "one")]
    pub nu: f64,
    /// Reaction coefficient `ζ`.
    #[serde(default)]
    pub zeta: f64,
    /// Potential `p(x)`.
    #[serde(default = "zero_fn")]
    pub potential: FunctionSpec,
    /// Source `f(x)`.
    pub source: FunctionSpec,
    /// Implicit Euler marching; absent for a steady problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSection>,
}

/// `[problem.time]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    /// Step `Δt`.
    pub dt: f64,
    /// Number of steps `N_t`.
    pub steps: usize,
    /// Initial condition.
    pub initial: FunctionSpec,
}

/// One side of `[boundary]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SideSection {
    /// Periodic (both sides must be periodic).
    Periodic,
    /// `y = value` at the boundary.
    Dirichlet {
        /// Boundary value.
        value: f64,
    },
    /// `∂y/∂x = gradient` at the boundary.
    Neumann {
        /// Boundary slope.
        gradient: f64,
    },
    /// `α·y_ghost/Δx + β·∂y/∂x = γ`.
    Robin {
        /// Ghost-value weight.
        alpha: f64,
        /// Slope weight.
        beta: f64,
        /// Right-hand side.
        gamma: f64,
    },
}

impl SideSection {
    fn condition(&self) -> BoundaryCondition<f64> {
        match *self {
            SideSection::Periodic => BoundaryCondition::Periodic,
            SideSection::Dirichlet { value } => BoundaryCondition::Dirichlet { value },
            SideSection::Neumann { gradient } => BoundaryCondition::Neumann { gradient },
            SideSection::Robin { alpha, beta, gamma } => {
                BoundaryCondition::Robin { alpha, beta, gamma }
            }
        }
    }
}

/// `[boundary]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    /// Condition at `x = 0`.
    pub left: SideSection,
    /// Condition at `x = 1`.
    pub right: SideSection,
}

/// Circuit realization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantName {
    /// Multi-controlled gates.
    #[default]
    Deep,
    /// Carry-qubit ladders.
    Shallow,
}

/// Hadamard-test layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutName {
    /// Transform before the test.
    Reversing,
    /// Controlled transform and inverse inside the test.
    ExplicitDagger,
}

fn default_depth() -> usize {
    1
}

fn default_prep() -> PrepMethod {
    PrepMethod::Fit
}

fn default_prep_tolerance() -> f64 {
    FitConfig::default().tolerance
}

fn default_prep_restarts() -> usize {
    FitConfig::default().restarts
}

fn default_source_step() -> f64 {
    1e-5
}

/// `[ansatz]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSection {
    /// Bricklayer depth `d` of the trial state.
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Deep or shallow term circuits.
    #[serde(default)]
    pub variant: VariantName,
    /// Hadamard-test layout (default depends on the variant).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutName>,
    /// Source/potential preparation: fitted (`fit`) or exact (`exact`).
    #[serde(default = "default_prep")]
    pub prep: PrepMethod,
    /// Bricklayer depth of fitted preparation circuits.
    #[serde(default = "default_depth")]
    pub prep_depth: usize,
    /// Residual accepted for a fitted preparation.
    #[serde(default = "default_prep_tolerance")]
    pub prep_tolerance: f64,
    /// Fitting attempts.
    #[serde(default = "default_prep_restarts")]
    pub prep_restarts: usize,
    /// Route of the ghost-weight term.
    #[serde(default)]
    pub neumann_mode: NeumannMode,
    /// Boundary-data convention of the source.
    #[serde(default)]
    pub source_convention: SourceConvention,
    /// Central-difference step of the source derivative.
    #[serde(default = "default_source_step")]
    pub source_step: f64,
}

impl Default for AnsatzSection {
    fn default() -> Self {
        Self {
            depth: 1,
            variant: VariantName::Deep,
            layout: None,
            prep: PrepMethod::Fit,
            prep_depth: 1,
            prep_tolerance: default_prep_tolerance(),
            prep_restarts: default_prep_restarts(),
            neumann_mode: NeumannMode::Dedicated,
            source_convention: SourceConvention::GhostElimination,
            source_step: 1e-5,
        }
    }
}

/// `[pso]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoSection {
    /// Particles (default `100·n`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particles: Option<usize>,
    /// Iteration budget of the first step.
    pub max_iterations: usize,
    /// Iteration budget of warm-started steps.
    pub warm_iterations: usize,
    /// Inertia weight.
    pub inertia: f64,
    /// Attraction to the particle's best.
    pub cognitive: f64,
    /// Attraction to the swarm's best.
    pub social: f64,
    /// Relative stagnation tolerance.
    pub tolerance: f64,
    /// Stagnation window.
    pub patience: usize,
    /// Progress line every this many iterations (0 = never).
    pub log_every: usize,
    /// Lower end of the initial `λ₀` box.
    pub lambda0_min: f64,
    /// Upper end of the initial `λ₀` box.
    pub lambda0_max: f64,
    /// Random seed (overridden by `--seed`).
    pub seed: u64,
}

impl Default for PsoSection {
    fn default() -> Self {
        let p = PsoConfig::default();
        let s = SolverConfig::default();
        Self {
            particles: None,
            max_iterations: p.max_iterations,
            warm_iterations: s.warm_pso_iterations,
            inertia: p.inertia,
            cognitive: p.cognitive,
            social: p.social,
            tolerance: p.tolerance,
            patience: p.patience,
            log_every: p.log_every,
            lambda0_min: s.lambda0_range.0,
            lambda0_max: s.lambda0_range.1,
            seed: s.seed,
        }
    }
}

/// `[gd]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GdSection {
    /// Initial trial step.
    pub step: f64,
    /// Iteration budget.
    pub max_iterations: usize,
    /// Stop when the gradient change is at most `10^-m`, `m ∈ [3, 7]`.
    pub tolerance_exponent: i32,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Consecutive increases treated as divergence.
    pub divergence_window: usize,
    /// Progress line every this many iterations (0 = never).
    pub log_every: usize,
    /// Descend on `J/|J(start)|`.
    pub normalize: bool,
}

impl Default for GdSection {
    fn default() -> Self {
        let g = GdConfig::default();
        Self {
            step: g.step,
            max_iterations: g.max_iterations,
            tolerance_exponent: g.tolerance_exponent,
            armijo: g.armijo,
            divergence_window: g.divergence_window,
            log_every: g.log_every,
            normalize: g.normalize,
        }
    }
}

fn default_name() -> String {
    "scenario".into()
}

fn default_dir() -> String {
    "out".into()
}

fn default_cache() -> Option<String> {
    Some("stateprep_cache.json".into())
}

/// `[output]`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Scenario name recorded in the summary.
    #[serde(default = "default_name")]
    pub name: String,
    /// Output directory (overridden by `--out-dir`).
    #[serde(default = "default_dir")]
    pub dir: String,
    /// Preparation cache file inside the output directory (omit to disable).
    #[serde(default = "default_cache", skip_serializing_if = "Option::is_none")]
    pub cache: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            name: default_name(),
            dir: default_dir(),
            cache: default_cache(),
        }
    }
}

/// Validated inputs of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunPlan {
    /// Discrete problem.
    pub problem: ProblemSpec64,
    /// Solver settings (seed included).
    pub solver: SolverConfig,
    /// Output directory.
    pub out_dir: PathBuf,
    /// Cache file, if enabled.
    pub cache_path: Option<PathBuf>,
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::new(field, format!("must be finite, got {v}")))
    }
}

fn sample(field: &str, f: &FunctionSpec, n_points: usize) -> Result<Vec<f64>, ConfigError> {
    f.sample(n_points).map_err(|m| ConfigError::new(field, m))
}

/// Maps a solver validation message (`pso.x …`, `gd.x …`) to its field.
fn solver_field(message: &str) -> String {
    message
        .split_whitespace()
        .next()
        .filter(|w| w.contains('.'))
        .map_or("solver".into(), str::to_string)
}

impl ScenarioConfig {
    /// Parses TOML text.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::parse(text)
            .map_err(|e| ConfigError::new("config", e.message().trim().replace('\n', " ")))?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path.is_empty() || path == "." {
                "config".to_string()
            } else {
                path
            };
            ConfigError::new(field, e.into_inner().message().trim().replace('\n', " "))
        })
    }

    /// Reads and parses a scenario file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Serializes to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs always serialize")
    }

    /// Validates everything and builds the run inputs. `seed` and `out_dir`
    /// override the file's values.
    pub fn build(&self, seed: Option<u64>, out_dir: Option<&Path>) -> Result<RunPlan, ConfigError> {
        let p = &self.problem;
        if !(2..=MAX_QUBITS).contains(&p.n) {
            return Err(ConfigError::new(
                "problem.n",
                format!("must be in 2..={MAX_QUBITS}, got {}", p.n),
            ));
        }
        let np = 1usize << p.n;
        let nu = finite("problem.nu", p.nu)?;
        if nu <= 0.0 {
            return Err(ConfigError::new(
                "problem.nu",
                format!("must be positive, got {nu}"),
            ));
        }
        let zeta = finite("problem.zeta", p.zeta)?;
        let source = sample("problem.source", &p.source, np)?;
        let potential = sample("problem.potential", &p.potential, np)?;
        let boundary = BoundarySpec64 {
            left: self.boundary.left.condition(),
            right: self.boundary.right.condition(),
        };
        boundary
            .validate()
            .map_err(|e| ConfigError::new("boundary", e.to_string()))?;
        let dx = 1.0 / (np as f64 + 1.0);
        for (side, name) in [
            (Side::Left, "boundary.left"),
            (Side::Right, "boundary.right"),
        ] {
            let bc = boundary.side(side);
            let values: Vec<f64> = match *bc {
                BoundaryCondition::Periodic => vec![],
                BoundaryCondition::Dirichlet { value } => vec![value],
                BoundaryCondition::Neumann { gradient } => vec![gradient],
                BoundaryCondition::Robin { alpha, beta, gamma } => vec![alpha, beta, gamma],
            };
            for v in values {
                finite(name, v)?;
            }
            bc.ghost(side, dx)
                .map_err(|e| ConfigError::new(name, e.to_string()))?;
        }
        let mut problem = ProblemSpec64::steady(p.n, nu, source, boundary);
        problem.zeta = zeta;
        problem.potential = potential;
        if let Some(t) = &p.time {
            if !(t.dt > 0.0) || !t.dt.is_finite() {
                return Err(ConfigError::new(
                    "problem.time.dt",
                    format!("must be positive, got {}", t.dt),
                ));
            }
            if t.steps == 0 {
                return Err(ConfigError::new("problem.time.steps", "must be at least 1"));
            }
            problem.time = Some(TimeSpec {
                dt: t.dt,
                steps: t.steps,
            });
            problem.initial = Some(sample("problem.time.initial", &t.initial, np)?);
        }
        problem
            .validate()
            .map_err(|e| ConfigError::new("problem", e.to_string()))?;

        let a = &self.ansatz;
        let fit = FitConfig {
            depth: a.prep_depth,
            tolerance: a.prep_tolerance,
            restarts: a.prep_restarts,
            ..FitConfig::default()
        };
        if a.prep_depth == 0 {
            return Err(ConfigError::new("ansatz.prep_depth", "must be at least 1"));
        }
        if !(a.prep_tolerance >= 0.0) {
            return Err(ConfigError::new(
                "ansatz.prep_tolerance",
                "must be non-negative",
            ));
        }
        let terms = TermOptions {
            variant: match a.variant {
                VariantName::Deep => Variant::Deep,
                VariantName::Shallow => Variant::Shallow,
            },
            layout: a.layout.map(|l| match l {
                LayoutName::Reversing => Layout::Reversing,
                LayoutName::ExplicitDagger => Layout::ExplicitDagger,
            }),
            neumann_mode: a.neumann_mode,
            prep: a.prep,
            fit,
        };
        let s = &self.pso;
        let pso = PsoConfig {
            particles: s.particles.unwrap_or(100 * p.n),
            max_iterations: s.max_iterations,
            inertia: s.inertia,
            cognitive: s.cognitive,
            social: s.social,
            tolerance: s.tolerance,
            patience: s.patience,
            log_every: s.log_every,
        };
        let g = &self.gd;
        let gd = GdConfig {
            step: g.step,
            max_iterations: g.max_iterations,
            tolerance_exponent: g.tolerance_exponent,
            armijo: g.armijo,
            divergence_window: g.divergence_window,
            log_every: g.log_every,
            normalize: g.normalize,
        };
        let solver = SolverConfig {
            depth: a.depth,
            terms,
            source_convention: a.source_convention,
            pso,
            warm_pso_iterations: s.warm_iterations,
            gd,
            lambda0_range: (s.lambda0_min, s.lambda0_max),
            source_step: a.source_step,
            seed: seed.unwrap_or(s.seed),
        };
        if a.depth == 0 {
            return Err(ConfigError::new("ansatz.depth", "must be at least 1"));
        }
        if !(a.source_step > 0.0) {
            return Err(ConfigError::new("ansatz.source_step", "must be positive"));
        }
        if !(s.lambda0_min.is_finite()
            && s.lambda0_max.is_finite()
            && s.lambda0_min <= s.lambda0_max)
        {
            return Err(ConfigError::new(
                "pso.lambda0_min",
                "lambda0_min..lambda0_max must be a finite interval",
            ));
        }
        solver.validate().map_err(|e| {
            let message = match e {
                bcvqa_solver::SolverError::InvalidConfig(m) => m,
                other => other.to_string(),
            };
            ConfigError::new(solver_field(&message), message)
        })?;

        let o = &self.output;
        if o.name.is_empty() || o.name.contains(['/', '\\']) {
            return Err(ConfigError::new(
                "output.name",
                "must be a non-empty plain name",
            ));
        }
        if let Some(c) = &o.cache {
            if c.is_empty() || c.contains(['/', '\\']) {
                return Err(ConfigError::new(
                    "output.cache",
                    "must be a plain file name",
                ));
            }
        }
        let out_dir = out_dir.map_or_else(|| PathBuf::from(&o.dir), Path::to_path_buf);
        let cache_path = o.cache.as_ref().map(|c| out_dir.join(c));
        Ok(RunPlan {
            problem,
            solver,
            out_dir,
            cache_path,
        })
    }
}
