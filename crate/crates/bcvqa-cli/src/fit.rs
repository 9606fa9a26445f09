//! The `fit` command: prepare one function as a quantum state.

use crate::config::ConfigError;
use crate::funcspec::FunctionSpec;
use crate::report::fmt17;
use crate::run::CliError;
use bcvqa_solver::{
    function_hash, prepare_state, FitCache, FitConfig, PrepMethod, Reporter, Stage,
};
use std::path::Path;

/// Options of `fit`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitRequest {
    /// Function to prepare.
    pub function: FunctionSpec,
    /// Register size.
    pub n: usize,
    /// Bricklayer depth of the fitted circuit.
    pub depth: usize,
    /// Fitted or exact preparation.
    pub method: PrepMethod,
    /// Seed of the fitting stream.
    pub seed: u64,
}

/// Prepares the function, updating the cache file `cache` if given, and
/// returns the report as `key=value` lines.
pub fn fit_command(req: &FitRequest, cache: Option<&Path>) -> Result<Vec<String>, CliError> {
    if !(1..=crate::config::MAX_QUBITS).contains(&req.n) {
        return Err(ConfigError {
            field: "n".into(),
            message: format!("must be in 1..={}", crate::config::MAX_QUBITS),
        }
        .into());
    }
    if req.depth == 0 {
        return Err(ConfigError {
            field: "depth".into(),
            message: "must be at least 1".into(),
        }
        .into());
    }
    let g = req.function.sample(1 << req.n).map_err(|m| ConfigError {
        field: "function".into(),
        message: m,
    })?;
    if g.iter().all(|v| *v == 0.0) {
        return Err(ConfigError {
            field: "function".into(),
            message: "is identically zero".into(),
        }
        .into());
    }
    let cfg = FitConfig {
        depth: req.depth,
        seed: req.seed,
        ..FitConfig::default()
    };
    let mut store = match cache {
        Some(p) => FitCache::load(p)?,
        None => FitCache::default(),
    };
    let prepared = prepare_state(
        &g,
        req.method,
        &cfg,
        Some(&mut store),
        Reporter::silent(Stage::FitPso),
    )?;
    if let Some(p) = cache {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        store.save(p)?;
    }
    let params = match req.method {
        PrepMethod::Fit => store.get(&function_hash(&g), req.n, req.depth).map(|f| {
            f.params
                .iter()
                .map(|v| fmt17(*v))
                .collect::<Vec<_>>()
                .join(";")
        }),
        PrepMethod::Exact => None,
    };
    let mut lines = vec![
        format!("function={}", req.function),
        format!("hash={}", function_hash(&g)),
        format!("n={}", req.n),
        format!("d={}", req.depth),
        format!(
            "method={}",
            if req.method == PrepMethod::Fit {
                "fit"
            } else {
                "exact"
            }
        ),
        format!("norm={}", fmt17(prepared.norm)),
        format!("residual={}", fmt17(prepared.residual)),
        format!("converged={}", prepared.residual <= cfg.tolerance),
        format!("gates={}", prepared.circuit.len()),
    ];
    if let Some(p) = params {
        lines.push(format!("params={p}"));
    }
    Ok(lines)
}
