//! Preparation circuits for sampled functions (sources and potentials).
//!
//! A function `g` is represented by a circuit `G` with `G|0⟩ ≈ ĝ = g/‖g‖`; the
//! norm is kept classically as `λ₀^{(g)} = 1/‖g‖`. Two constructions exist:
//!
//! * [`fit_function_gate`] — a bricklayer trial state fitted by minimizing
//!   `1 − ⟨u(λ_c)|ĝ⟩` (swarm search, then gradient descent with the exact
//!   π-shift derivative `∂⟨u|ĝ⟩/∂θ_i = ½⟨u(θ + π e_i)|ĝ⟩`);
//! * [`exact_state_circuit`] — a binary tree of (multi-)controlled `Ry`
//!   rotations that prepares any real vector exactly.
//!
//! Fitted parameters can be cached on disk in a JSON file keyed by
//! `(function hash, n, d)`.

use crate::error::SolverError;
use crate::optimizer::{gd_minimize, pso_minimize, GdConfig, PsoConfig, Reporter};
use crate::Result;
use bcvqa_sim::{build_ansatz, parameter_count, AnsatzConfig, Circuit, GateKind, GateOp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

/// Construction used for a preparation circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrepMethod {
    /// Fitted bricklayer trial state.
    Fit,
    /// Exact rotation tree.
    Exact,
}

/// Settings of the fitting problem.
#[derive(Clone, Debug, PartialEq)]
pub struct FitConfig {
    /// Bricklayer depth of the fitted circuit.
    pub depth: usize,
    /// Swarm settings.
    pub pso: PsoConfig,
    /// Gradient-descent settings.
    pub gd: GdConfig,
    /// Residual `1 − ⟨u|ĝ⟩` regarded as converged.
    pub tolerance: f64,
    /// Independent swarm + descent attempts before giving up.
    pub restarts: usize,
    /// Base seed of the per-function random stream.
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            depth: 1,
            pso: PsoConfig {
                particles: 60,
                max_iterations: 300,
                patience: 50,
                log_every: 0,
                ..PsoConfig::default()
            },
            gd: GdConfig {
                log_every: 0,
                ..GdConfig::default()
            },
            tolerance: 1e-6,
            restarts: 3,
            seed: 0,
        }
    }
}

/// Outcome of a fit.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    /// `λ₀^{(g)} = 1/‖g‖`.
    pub scale: f64,
    /// Fitted parameters.
    pub params: Vec<f64>,
    /// Final residual `1 − ⟨u|ĝ⟩`.
    pub residual: f64,
    /// Whether the residual reached the tolerance.
    pub converged: bool,
}

fn normalized(g: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(SolverError::ZeroFunction);
    }
    Ok((g.iter().map(|v| v / n).collect(), n))
}

fn register_size(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(SolverError::InvalidConfig(format!(
            "function length {len} is not a power of two ≥ 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Real amplitudes `u(λ_c)` of the bricklayer state.
pub fn ansatz_state(config: &AnsatzConfig, params: &[f64]) -> Result<Vec<f64>> {
    Ok(build_ansatz(config, params)?.run::<f64>()?.real_parts())
}

/// Overlap `⟨u(λ_c)|ĝ⟩` (real part).
fn overlap(config: &AnsatzConfig, params: &[f64], target: &[f64]) -> Result<f64> {
    Ok(ansatz_state(config, params)?
        .iter()
        .zip(target)
        .map(|(a, b)| a * b)
        .sum())
}

/// Fits a bricklayer circuit to `g` by minimizing `1 − ⟨u(λ_c)|ĝ⟩`.
pub fn fit_function_gate(
    g: &[f64],
    cfg: &FitConfig,
    rng: &mut ChaCha8Rng,
    report: Reporter<'_>,
) -> Result<FitResult> {
    let n = register_size(g.len())?;
    let (target, norm) = normalized(g)?;
    let config = AnsatzConfig::new(n, cfg.depth)?;
    let c = parameter_count(&config);
    let cost = |x: &[f64]| overlap(&config, x, &target).map_or(f64::INFINITY, |o| 1.0 - o);
    let grad = |x: &[f64]| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(c);
        let mut shifted = x.to_vec();
        for i in 0..c {
            shifted[i] = x[i] + PI;
            out.push(-0.5 * overlap(&config, &shifted, &target)?);
            shifted[i] = x[i];
        }
        Ok(out)
    };
    let bounds = vec![(0.0, 4.0 * PI); c];
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..cfg.restarts.max(1) {
        let swarm = pso_minimize(
            cost,
            &bounds,
            None,
            &cfg.pso,
            rng,
            Reporter {
                stage: crate::Stage::FitPso,
                ..report
            },
        )?;
        let polish = gd_minimize(
            cost,
            grad,
            &swarm.best,
            &cfg.gd,
            Reporter {
                stage: crate::Stage::FitGd,
                ..report
            },
        )?;
        let residual = cost(&polish.x);
        if best.as_ref().map_or(true, |(_, r)| residual < *r) {
            best = Some((polish.x, residual));
        }
        if best.as_ref().is_some_and(|(_, r)| *r <= cfg.tolerance) {
            break;
        }
    }
    let (params, residual) = best.expect("at least one attempt");
    Ok(FitResult {
        scale: 1.0 / norm,
        params,
        residual,
        converged: residual <= cfg.tolerance,
    })
}

/// Circuit preparing `g/‖g‖` exactly from `|0⟩` with a tree of controlled `Ry`.
///
/// Qubit `n − 1` splits the weight between the two halves of the vector; each
/// lower qubit refines it under every pattern of the qubits above. The last
/// level uses signed angles so negative entries are reproduced.
pub fn exact_state_circuit(g: &[f64]) -> Result<Circuit> {
    let n = register_size(g.len())?;
    let (target, _) = normalized(g)?;
    let mut c = Circuit::new(n);
    for q in (0..n).rev() {
        let block = 1usize << (q + 1);
        let half = 1usize << q;
        let high: Vec<usize> = (q + 1..n).collect();
        for h in 0..(1usize << (n - q - 1)) {
            let base = h * block;
            let (a0, a1) = if q == 0 {
                (target[base], target[base + 1])
            } else {
                let w =
                    |r: std::ops::Range<usize>| target[r].iter().map(|v| v * v).sum::<f64>().sqrt();
                (w(base..base + half), w(base + half..base + block))
            };
            if a0 == 0.0 && a1 == 0.0 {
                continue;
            }
            let theta = 2.0 * a1.atan2(a0);
            if theta == 0.0 {
                continue;
            }
            let flips: Vec<GateOp> = high
                .iter()
                .filter(|&&k| (h >> (k - q - 1)) & 1 == 0)
                .map(|&k| GateOp::x(k))
                .collect();
            c.extend(flips.iter().cloned())?;
            c.push(if high.is_empty() {
                GateOp::ry(q, theta)
            } else {
                GateOp::controlled(GateKind::Ry(theta), high.clone(), q)
            })?;
            c.extend(flips)?;
        }
    }
    Ok(c)
}

/// Hex SHA-256 of the little-endian bit patterns of `g`.
pub fn function_hash(g: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in g {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// One cached fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CachedFit {
    /// Hash of the fitted function.
    pub hash: String,
    /// Register size.
    pub n: usize,
    /// Bricklayer depth.
    pub d: usize,
    /// Fitted parameters.
    pub params: Vec<f64>,
    /// Residual reached.
    pub residual: f64,
}

/// Fitted parameters keyed by `(function hash, n, d)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FitCache {
    entries: BTreeMap<String, CachedFit>,
}

impl FitCache {
    fn key(hash: &str, n: usize, d: usize) -> String {
        format!("{hash}/{n}/{d}")
    }

    /// Loads a cache file; a missing file gives an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| SolverError::Cache(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(SolverError::Cache(format!("{}: {e}", path.display()))),
        }
    }

    /// Writes the cache as pretty-printed JSON.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| SolverError::Cache(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| SolverError::Cache(format!("{}: {e}", path.display())))
    }

    /// Cached fit for a function, if any.
    pub fn get(&self, hash: &str, n: usize, d: usize) -> Option<&CachedFit> {
        self.entries.get(&Self::key(hash, n, d))
    }

    /// Stores (or replaces) a fit.
    pub fn insert(&mut self, fit: CachedFit) {
        self.entries.insert(Self::key(&fit.hash, fit.n, fit.d), fit);
    }

    /// Number of cached fits.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the cache is empty.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A preparation circuit with its classical normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedState {
    /// Circuit with `circuit|0⟩ ≈ g/‖g‖`.
    pub circuit: Circuit,
    /// `‖g‖`.
    pub norm: f64,
    /// `1 − ⟨circuit|0⟩, ĝ⟩`.
    pub residual: f64,
}

/// Random stream of one fit, derived from the base seed and the function hash
/// so that a fit does not depend on what ran before it (or on cache hits).
fn fit_rng(seed: u64, hash: &str) -> ChaCha8Rng {
    let prefix = u64::from_str_radix(&hash[..16], 16).unwrap_or(0);
    ChaCha8Rng::seed_from_u64(seed ^ prefix)
}

/// Builds the preparation circuit of `g` with the requested method, consulting
/// and updating `cache` for fitted circuits.
pub fn prepare_state(
    g: &[f64],
    method: PrepMethod,
    cfg: &FitConfig,
    cache: Option<&mut FitCache>,
    report: Reporter<'_>,
) -> Result<PreparedState> {
    let n = register_size(g.len())?;
    let (target, norm) = normalized(g)?;
    let circuit = match method {
        PrepMethod::Exact => exact_state_circuit(g)?,
        PrepMethod::Fit => {
            let config = AnsatzConfig::new(n, cfg.depth)?;
            let hash = function_hash(g);
            let cached = cache
                .as_ref()
                .and_then(|c| c.get(&hash, n, cfg.depth))
                .map(|f| f.params.clone());
            let params = match cached {
                Some(p) if p.len() == parameter_count(&config) => p,
                _ => {
                    let fit = fit_function_gate(g, cfg, &mut fit_rng(cfg.seed, &hash), report)?;
                    if let Some(c) = cache {
                        c.insert(CachedFit {
                            hash,
                            n,
                            d: cfg.depth,
                            params: fit.params.clone(),
                            residual: fit.residual,
                        });
                    }
                    fit.params
                }
            };
            build_ansatz(&config, &params)?
        }
    };
    let state = circuit.run::<f64>()?.real_parts();
    let residual = 1.0 - state.iter().zip(&target).map(|(a, b)| a * b).sum::<f64>();
    Ok(PreparedState {
        circuit,
        norm,
        residual,
    })
}
