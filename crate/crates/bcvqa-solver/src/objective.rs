//! The boundary-corrected variational objective and its gradients.
//!
//! With the trial solution `y = λ₀·u(λ_c)`, `⟨u|u⟩ = 1`, the discrete energy
//!
//! ```text
//! J(λ₀, λ_c) = Δx·[ λ₀²·Q(u) − 2λ₀·S(u) ]
//! Q(u) = (ν/Δx²)·(2 − 2 j_L + j_DN − G) + r₀ + ‖r_var‖·j_P
//! S(u) = ‖f̃‖·j_S
//! ```
//!
//! equals `Δx·(yᵀA y − 2 yᵀf̃)` for the ghost-eliminated system of
//! [`bcvqa_pde::problem`], so its minimizer is the finite-difference solution.
//! The expectations are
//!
//! * `j_L = Re⟨u|S|u⟩` — cyclic-shift adder (`u†(S + Sᵀ − 2I)u = 2 j_L − 2`);
//! * `j_DN = ⟨u|C|u⟩ = 2u₁u_N` — removes the periodic corner couplings;
//! * `G = a_L u₁² + a_R u_N²` — ghost weights, `a·j_N` with `j_N = u₁² + u_N²`
//!   when both sides share `a`, otherwise `‖w‖·j_W` through the potential
//!   unit with `w = a_L e₁ + a_R e_N`;
//! * `j_P = Σ u_k² p̂_k` — non-constant reaction weights `r_var = −ζp`;
//! * `j_S = Re⟨f̂|u⟩` — source, `f̃ = f + (ν/Δx²)(b_L e₁ + b_R e_N) (+ y_prev/Δt)`.
//!
//! `r₀` collects the constant reaction weight (`1/Δt` for a time step, `−ζp`
//! when the potential is constant), evaluated without a circuit.

use crate::error::SolverError;
use crate::hadamard::{evaluate_term, CompiledTerm, Layout, TermCircuit};
use crate::optimizer::Reporter;
use crate::stateprep::{exact_state_circuit, prepare_state, FitCache, FitConfig, PrepMethod};
use crate::Result;
use bcvqa_pde::{ProblemSpec64, Side};
use bcvqa_sim::qnpu::{
    boundary_dn_qnpu, boundary_n_qnpu, laplace_qnpu_variant, potential_qnpu, source_qnpu,
    transform_tt, Variant,
};
use bcvqa_sim::{build_ansatz, parameter_count, AnsatzConfig, Circuit, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Optimization unknowns: classical scale and circuit parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Control {
    /// Scale `λ₀`.
    pub lambda0: f64,
    /// Circuit parameters `λ_c`.
    pub params: Vec<f64>,
}

impl Control {
    /// Flattened `[λ₀, λ_c…]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.params.len() + 1);
        v.push(self.lambda0);
        v.extend_from_slice(&self.params);
        v
    }

    /// Inverse of [`Control::to_vec`].
    pub fn from_slice(x: &[f64]) -> Self {
        Self {
            lambda0: x[0],
            params: x[1..].to_vec(),
        }
    }
}

/// How boundary data enter the source.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceConvention {
    /// `f̃ += (ν/Δx²)·b` per side: exact elimination of the ghost values.
    #[default]
    GhostElimination,
    /// `f̃ += 0.5·λ₀·(ν/Δx²)·b` per side (for Dirichlet data
    /// `f̃₁ = f₁ + 0.5·D·ν·λ₀/Δx²`), evaluated at a fixed `λ₀`.
    HalfLambda,
}

/// Evaluation route of the ghost-weight term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeumannMode {
    /// The two-sided j_N unit when both sides share the weight, else the potential unit.
    #[default]
    Dedicated,
    /// Always the potential unit with the ghost-weight vector.
    ViaPotential,
}

/// Classical data of one (steady or single-step) variational problem.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveProblem {
    /// Register size `n`.
    pub n: usize,
    /// Grid spacing `Δx`.
    pub dx: f64,
    /// `ν/Δx²`.
    pub stiffness: f64,
    /// Periodic boundary (no corner removal, no ghost terms).
    pub periodic: bool,
    /// Ghost weights `(a_L, a_R)` (zero when periodic).
    pub ghost_weights: (f64, f64),
    /// Constant reaction weight `r₀`.
    pub reaction_const: f64,
    /// Non-constant reaction weights, if any.
    pub reaction_var: Option<Vec<f64>>,
    /// Modified source `f̃`.
    pub source: Vec<f64>,
}

impl EffectiveProblem {
    /// Whether the corner-removal term j_DN is active.
    pub fn dn_active(&self) -> bool {
        !self.periodic
    }

    /// Whether any ghost weight is nonzero.
    pub fn ghost_active(&self) -> bool {
        self.ghost_weights.0 != 0.0 || self.ghost_weights.1 != 0.0
    }

    /// Dense boundary-corrected matrix `A` (row-major), for cross-checks.
    pub fn dense_matrix(&self) -> Vec<Vec<f64>> {
        let np = 1usize << self.n;
        let s = self.stiffness;
        let mut a = vec![vec![0.0; np]; np];
        for k in 0..np {
            a[k][k] =
                2.0 * s + self.reaction_const + self.reaction_var.as_ref().map_or(0.0, |r| r[k]);
            a[k][(k + 1) % np] -= s;
            a[(k + 1) % np][k] -= s;
        }
        if !self.periodic {
            a[0][np - 1] += s;
            a[np - 1][0] += s;
            a[0][0] -= s * self.ghost_weights.0;
            a[np - 1][np - 1] -= s * self.ghost_weights.1;
        }
        a
    }
}

/// Effective problem of a steady solve (`prev = None`) or of one implicit
/// Euler step from `prev = (y_prev, Δt)`.
///
/// `lambda0` is only used by [`SourceConvention::HalfLambda`].
pub fn effective_problem(
    problem: &ProblemSpec64,
    prev: Option<(&[f64], f64)>,
    convention: SourceConvention,
    lambda0: f64,
) -> Result<EffectiveProblem> {
    problem.validate()?;
    if problem.n_qubits < 2 {
        return Err(SolverError::InvalidConfig(
            "variational problems need at least 2 qubits".into(),
        ));
    }
    let np = problem.n_points();
    let s = problem.stiffness();
    let dt = match prev {
        Some((y, dt)) => {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(SolverError::InvalidConfig(format!(
                    "time step must be positive, got {dt}"
                )));
            }
            if y.len() != np {
                return Err(bcvqa_pde::PdeError::LengthMismatch {
                    expected: np,
                    got: y.len(),
                }
                .into());
            }
            Some(dt)
        }
        None => None,
    };
    let reaction = problem.reaction(dt);
    let (reaction_const, reaction_var) = if reaction.iter().all(|&r| r == reaction[0]) {
        (reaction[0], None)
    } else {
        let base = dt.map_or(0.0, |dt| 1.0 / dt);
        (base, Some(reaction.iter().map(|r| r - base).collect()))
    };
    let mut source = problem.source.clone();
    if let Some((y, dt)) = prev {
        for (f, v) in source.iter_mut().zip(y) {
            *f += v / dt;
        }
    }
    let ghosts = problem.ghosts()?;
    let (periodic, ghost_weights) = match ghosts {
        None => (true, (0.0, 0.0)),
        Some((l, r)) => {
            let factor = match convention {
                SourceConvention::GhostElimination => 1.0,
                SourceConvention::HalfLambda => 0.5 * lambda0,
            };
            source[0] += factor * s * l.b;
            source[np - 1] += factor * s * r.b;
            (false, (l.a, r.a))
        }
    };
    Ok(EffectiveProblem {
        n: problem.n_qubits,
        dx: problem.dx(),
        stiffness: s,
        periodic,
        ghost_weights,
        reaction_const,
        reaction_var,
        source,
    })
}

/// Boundary corrections of a steady problem at scale `lambda0`.
pub fn boundary_corrections(
    problem: &ProblemSpec64,
    lambda0: f64,
    convention: SourceConvention,
) -> Result<EffectiveProblem> {
    problem.boundary.validate()?;
    for side in [Side::Left, Side::Right] {
        problem.boundary.side(side).ghost(side, problem.dx())?;
    }
    effective_problem(problem, None, convention, lambda0)
}

/// Choices that shape the term circuits.
#[derive(Clone, Debug, PartialEq)]
pub struct TermOptions {
    /// Deep or carry-qubit circuits.
    pub variant: Variant,
    /// Hadamard-test layout of transformed terms (default: reversing for deep,
    /// explicit dagger for shallow).
    pub layout: Option<Layout>,
    /// Ghost-weight route.
    pub neumann_mode: NeumannMode,
    /// Construction of the source and potential preparation circuits.
    pub prep: PrepMethod,
    /// Fitting settings for [`PrepMethod::Fit`].
    pub fit: FitConfig,
}

impl Default for TermOptions {
    fn default() -> Self {
        Self {
            variant: Variant::Deep,
            layout: None,
            neumann_mode: NeumannMode::Dedicated,
            prep: PrepMethod::Fit,
            fit: FitConfig::default(),
        }
    }
}

impl TermOptions {
    /// The layout in effect for the chosen variant.
    pub fn effective_layout(&self) -> Layout {
        self.layout.unwrap_or(match self.variant {
            Variant::Deep => Layout::Reversing,
            Variant::Shallow => Layout::ExplicitDagger,
        })
    }
}

/// A term circuit with the classical factor multiplying its expectation.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTerm {
    /// Classical factor (`a`, `‖w‖`, `‖r_var‖` or `‖f̃‖`).
    pub weight: f64,
    /// The circuit.
    pub circuit: TermCircuit,
}

/// The active term circuits of one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct TermSet {
    /// Cyclic-shift adder.
    pub laplace: TermCircuit,
    /// Corner removal.
    pub dn: Option<TermCircuit>,
    /// Two-sided ghost weight through the j_N unit.
    pub neumann: Option<WeightedTerm>,
    /// Ghost weights through the potential unit.
    pub ghost: Option<WeightedTerm>,
    /// Non-constant reaction weights.
    pub potential: Option<WeightedTerm>,
    /// Source.
    pub source: Option<WeightedTerm>,
    /// Worst preparation residual among the fitted circuits.
    pub prep_residual: f64,
}

/// Raw expectations of one trial state (0 for inactive terms).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TermValues {
    /// `j_L`.
    pub laplace: f64,
    /// `j_DN`.
    pub dn: f64,
    /// `j_N`.
    pub neumann: f64,
    /// `j_W` (ghost weights through the potential unit).
    pub ghost: f64,
    /// `j_P`.
    pub potential: f64,
    /// `j_S`.
    pub source: f64,
}

fn weighted_potential(
    n: usize,
    weights: &[f64],
    prepared: Circuit,
    norm: f64,
) -> Result<WeightedTerm> {
    debug_assert_eq!(weights.len(), 1 << n);
    Ok(WeightedTerm {
        weight: norm,
        circuit: TermCircuit::plain(potential_qnpu(n, &prepared)?),
    })
}

impl TermSet {
    /// Builds the circuits for `eff`, preparing source and potential states.
    pub fn build(
        eff: &EffectiveProblem,
        options: &TermOptions,
        cache: Option<&mut FitCache>,
        report: Reporter<'_>,
    ) -> Result<Self> {
        let n = eff.n;
        let np = 1usize << n;
        let variant = options.variant;
        let layout = options.effective_layout();
        let laplace = TermCircuit::plain(laplace_qnpu_variant(n, variant)?);
        let transformed = |qnpu: Circuit| -> Result<TermCircuit> {
            Ok(TermCircuit::transformed(
                transform_tt(n, variant)?,
                qnpu,
                layout,
            ))
        };
        let dn = if eff.dn_active() {
            Some(transformed(boundary_dn_qnpu(n, variant)?)?)
        } else {
            None
        };
        let (a_l, a_r) = eff.ghost_weights;
        let mut neumann = None;
        let mut ghost = None;
        if eff.ghost_active() {
            if a_l == a_r && options.neumann_mode == NeumannMode::Dedicated {
                neumann = Some(WeightedTerm {
                    weight: a_l,
                    circuit: transformed(boundary_n_qnpu(n, variant)?)?,
                });
            } else {
                let mut w = vec![0.0; np];
                w[0] = a_l;
                w[np - 1] += a_r;
                let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                ghost = Some(weighted_potential(n, &w, exact_state_circuit(&w)?, norm)?);
            }
        }
        let mut residual: f64 = 0.0;
        let mut cache = cache;
        let potential = match &eff.reaction_var {
            Some(r) => {
                let prep =
                    prepare_state(r, options.prep, &options.fit, cache.as_deref_mut(), report)?;
                residual = residual.max(prep.residual);
                Some(weighted_potential(n, r, prep.circuit, prep.norm)?)
            }
            None => None,
        };
        let source = if eff.source.iter().any(|&f| f != 0.0) {
            let prep = prepare_state(&eff.source, options.prep, &options.fit, cache, report)?;
            residual = residual.max(prep.residual);
            Some(WeightedTerm {
                weight: prep.norm,
                circuit: TermCircuit::with_controlled_ansatz(source_qnpu(n, &prep.circuit)?),
            })
        } else {
            None
        };
        Ok(Self {
            laplace,
            dn,
            neumann,
            ghost,
            potential,
            source,
            prep_residual: residual,
        })
    }

    /// Full Hadamard-test evaluation of every active term for one trial state.
    pub fn evaluate_exact(&self, ansatz: &Circuit) -> Result<TermValues> {
        let run = |t: &TermCircuit| evaluate_term(&t.with_ansatz(ansatz.clone()));
        let opt = |t: Option<&TermCircuit>| t.map_or(Ok(0.0), run);
        Ok(TermValues {
            laplace: run(&self.laplace)?,
            dn: opt(self.dn.as_ref())?,
            neumann: opt(self.neumann.as_ref().map(|w| &w.circuit))?,
            ghost: opt(self.ghost.as_ref().map(|w| &w.circuit))?,
            potential: opt(self.potential.as_ref().map(|w| &w.circuit))?,
            source: opt(self.source.as_ref().map(|w| &w.circuit))?,
        })
    }
}

/// [`TermSet`] reduced to operators on the data register.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledTerms {
    laplace: CompiledTerm,
    dn: Option<CompiledTerm>,
    neumann: Option<CompiledTerm>,
    ghost: Option<CompiledTerm>,
    potential: Option<CompiledTerm>,
    source: Option<CompiledTerm>,
}

impl CompiledTerms {
    /// Compiles every active term for an `n`-qubit trial state.
    pub fn compile(set: &TermSet, n: usize) -> Result<Self> {
        let c = |t: &TermCircuit| CompiledTerm::compile(t, n);
        let opt = |t: Option<&TermCircuit>| t.map(c).transpose();
        Ok(Self {
            laplace: c(&set.laplace)?,
            dn: opt(set.dn.as_ref())?,
            neumann: opt(set.neumann.as_ref().map(|w| &w.circuit))?,
            ghost: opt(set.ghost.as_ref().map(|w| &w.circuit))?,
            potential: opt(set.potential.as_ref().map(|w| &w.circuit))?,
            source: opt(set.source.as_ref().map(|w| &w.circuit))?,
        })
    }

    /// Expectations for the trial-state amplitudes `u`.
    pub fn evaluate(&self, u: &[C64]) -> TermValues {
        let opt = |t: &Option<CompiledTerm>| t.as_ref().map_or(0.0, |t| t.evaluate(u));
        TermValues {
            laplace: self.laplace.evaluate(u),
            dn: opt(&self.dn),
            neumann: opt(&self.neumann),
            ghost: opt(&self.ghost),
            potential: opt(&self.potential),
            source: opt(&self.source),
        }
    }

    /// Expectations of the quadratic terms only (source left at 0).
    fn evaluate_quadratic(&self, u: &[C64]) -> TermValues {
        let opt = |t: &Option<CompiledTerm>| t.as_ref().map_or(0.0, |t| t.evaluate(u));
        TermValues {
            laplace: self.laplace.evaluate(u),
            dn: opt(&self.dn),
            neumann: opt(&self.neumann),
            ghost: opt(&self.ghost),
            potential: opt(&self.potential),
            source: 0.0,
        }
    }

    fn evaluate_source(&self, u: &[C64]) -> f64 {
        self.source.as_ref().map_or(0.0, |t| t.evaluate(u))
    }
}

/// The objective of one variational problem, ready for optimization.
#[derive(Clone, Debug)]
pub struct Objective {
    /// Trial-state configuration.
    pub config: AnsatzConfig,
    /// Classical problem data.
    pub eff: EffectiveProblem,
    /// Term circuits.
    pub terms: TermSet,
    compiled: CompiledTerms,
    /// Central-difference step for the source derivative.
    pub source_step: f64,
}

impl Objective {
    /// Assembles the objective for `eff` with trial states of depth `depth`.
    pub fn build(
        eff: EffectiveProblem,
        depth: usize,
        options: &TermOptions,
        cache: Option<&mut FitCache>,
        report: Reporter<'_>,
    ) -> Result<Self> {
        let config = AnsatzConfig::new(eff.n, depth)?;
        let terms = TermSet::build(&eff, options, cache, report)?;
        Self::from_terms(eff, config, terms)
    }

    /// Wraps prebuilt term circuits.
    pub fn from_terms(eff: EffectiveProblem, config: AnsatzConfig, terms: TermSet) -> Result<Self> {
        if config.n_qubits != eff.n {
            return Err(SolverError::InvalidConfig(format!(
                "trial state on {} qubits for a {}-qubit problem",
                config.n_qubits, eff.n
            )));
        }
        let compiled = CompiledTerms::compile(&terms, eff.n)?;
        Ok(Self {
            config,
            eff,
            terms,
            compiled,
            source_step: 1e-5,
        })
    }

    /// Number of circuit parameters.
    pub fn parameter_count(&self) -> usize {
        parameter_count(&self.config)
    }

    /// Trial-state circuit for `params`.
    pub fn ansatz(&self, params: &[f64]) -> Result<Circuit> {
        Ok(build_ansatz(&self.config, params)?)
    }

    /// Trial-state amplitudes for `params`.
    pub fn state(&self, params: &[f64]) -> Result<Vec<C64>> {
        Ok(self.ansatz(params)?.run::<f64>()?.into_amplitudes())
    }

    /// Term expectations through the compiled data-register operators.
    pub fn term_values(&self, params: &[f64]) -> Result<TermValues> {
        Ok(self.compiled.evaluate(&self.state(params)?))
    }

    /// Term expectations through full Hadamard-test simulations.
    pub fn term_values_exact(&self, params: &[f64]) -> Result<TermValues> {
        self.terms.evaluate_exact(&self.ansatz(params)?)
    }

    /// `Q(u)` from term values.
    pub fn quadratic(&self, v: &TermValues) -> f64 {
        let eff = &self.eff;
        let mut bracket = 2.0 - 2.0 * v.laplace;
        if eff.dn_active() {
            bracket += v.dn;
        }
        if let Some(w) = &self.terms.neumann {
            bracket -= w.weight * v.neumann;
        }
        if let Some(w) = &self.terms.ghost {
            bracket -= w.weight * v.ghost;
        }
        let potential = self
            .terms
            .potential
            .as_ref()
            .map_or(0.0, |w| w.weight * v.potential);
        eff.stiffness * bracket + eff.reaction_const + potential
    }

    /// `S(u)` from term values.
    pub fn source(&self, v: &TermValues) -> f64 {
        self.terms
            .source
            .as_ref()
            .map_or(0.0, |w| w.weight * v.source)
    }

    /// `J` from the scale and term values.
    pub fn assemble(&self, lambda0: f64, v: &TermValues) -> f64 {
        self.eff.dx * (lambda0 * lambda0 * self.quadratic(v) - 2.0 * lambda0 * self.source(v))
    }

    /// `J(λ₀, λ_c)`.
    pub fn value(&self, control: &Control) -> Result<f64> {
        Ok(self.assemble(control.lambda0, &self.term_values(&control.params)?))
    }

    /// `J` at a flattened control, `+∞` on evaluation failure.
    pub fn value_flat(&self, x: &[f64]) -> f64 {
        self.value(&Control::from_slice(x)).unwrap_or(f64::INFINITY)
    }

    /// `∂J/∂λ₀ = (1/λ₀)·(2·J_quadratic + J_source)` from term values of the same control.
    pub fn grad_lambda0(&self, control: &Control, v: &TermValues) -> Result<f64> {
        let l = control.lambda0;
        if l == 0.0 {
            return Err(SolverError::ZeroScale);
        }
        let j_quadratic = self.eff.dx * l * l * self.quadratic(v);
        let j_source = -2.0 * self.eff.dx * l * self.source(v);
        Ok((2.0 * j_quadratic + j_source) / l)
    }

    /// `∂J/∂λ_c`: ±π/2 parameter shifts for the quadratic terms, central
    /// differences with step [`Objective::source_step`] for the source term.
    pub fn grad_lambda_c(&self, control: &Control) -> Result<Vec<f64>> {
        let l = control.lambda0;
        let h = self.source_step;
        let has_source = self.terms.source.is_some();
        (0..control.params.len())
            .into_par_iter()
            .map(|i| {
                let at = |delta: f64| -> Result<Vec<C64>> {
                    let mut p = control.params.clone();
                    p[i] += delta;
                    self.state(&p)
                };
                let qp = self.quadratic(&self.compiled.evaluate_quadratic(&at(FRAC_PI_2)?));
                let qm = self.quadratic(&self.compiled.evaluate_quadratic(&at(-FRAC_PI_2)?));
                let dq = 0.5 * (qp - qm);
                let ds = if has_source {
                    let w = self.terms.source.as_ref().map_or(0.0, |w| w.weight);
                    w * (self.compiled.evaluate_source(&at(h)?)
                        - self.compiled.evaluate_source(&at(-h)?))
                        / (2.0 * h)
                } else {
                    0.0
                };
                Ok(self.eff.dx * (l * l * dq - 2.0 * l * ds))
            })
            .collect()
    }

    /// Full gradient `[∂J/∂λ₀, ∂J/∂λ_c…]`.
    pub fn gradient(&self, control: &Control) -> Result<Vec<f64>> {
        let v = self.term_values(&control.params)?;
        let mut g = vec![self.grad_lambda0(control, &v)?];
        g.extend(self.grad_lambda_c(control)?);
        Ok(g)
    }

    /// Reconstructed solution `λ₀·Re u`.
    pub fn solution(&self, control: &Control) -> Result<Vec<f64>> {
        Ok(self
            .state(&control.params)?
            .iter()
            .map(|a| control.lambda0 * a.re)
            .collect())
    }
}
