//! SO4 bricklayer trial-state circuit `U(λ_c)`.
//!
//! Each block acts on a neighbouring qubit pair `(a, a+1)` with the lower index
//! drawn as the upper wire. A block realizes a real orthogonal 4×4 matrix:
//!
//! ```text
//! a: Rz(π/2) ───────────── X ─ Rz(λ1) Ry(λ2) Rz(λ3) ─ X ─────────────── Rz(−π/2)
//! b: Rz(π/2) ─ Ry(π/2) ─── ● ─ Rz(λ4) Ry(λ5) Rz(λ6) ─ ● ─ Ry(−π/2) ─── Rz(−π/2)
//! ```
//!
//! Blocks of the first layer carry only `λ1..λ3` (the `λ4..λ6` rotations are
//! absent). Layer `l` (0-based) places blocks on pairs starting at offset `l mod 2`;
//! a qubit without a partner in a layer receives no block.

use crate::circuit::Circuit;
use crate::error::SimError;
use crate::gate::GateOp;
use crate::Result;
use std::f64::consts::FRAC_PI_2;

/// Register size and depth of the bricklayer ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AnsatzConfig {
    /// Number of qubits `n = log₂ N_p`.
    pub n_qubits: usize,
    /// Number of bricklayer layers `d ≥ 1`.
    pub depth: usize,
}

/// Placement of one SO4 block inside the ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSlot {
    /// 0-based layer index.
    pub layer: usize,
    /// Lower qubit of the pair `(low, low + 1)`.
    pub low: usize,
    /// Index of the block's first parameter in `λ_c`.
    pub first_param: usize,
    /// 3 for first-layer blocks, 6 otherwise.
    pub n_params: usize,
}

impl AnsatzConfig {
    /// Validated configuration (`n ≥ 2`, `d ≥ 1`).
    pub fn new(n_qubits: usize, depth: usize) -> Result<Self> {
        if n_qubits < 2 {
            return Err(SimError::InvalidSize(format!(
                "ansatz needs at least 2 qubits, got {n_qubits}"
            )));
        }
        if depth == 0 {
            return Err(SimError::InvalidSize(
                "ansatz depth must be at least 1".into(),
            ));
        }
        Ok(Self { n_qubits, depth })
    }

    /// Block placements in application order.
    pub fn blocks(&self) -> Vec<BlockSlot> {
        let mut slots = Vec::new();
        let mut next = 0;
        for layer in 0..self.depth {
            let n_params = if layer == 0 { 3 } else { 6 };
            let mut low = layer % 2;
            while low + 1 < self.n_qubits {
                slots.push(BlockSlot {
                    layer,
                    low,
                    first_param: next,
                    n_params,
                });
                next += n_params;
                low += 2;
            }
        }
        slots
    }
}

/// Number of ansatz parameters `c`: 3 per first-layer block, 6 per later block.
pub fn parameter_count(config: &AnsatzConfig) -> usize {
    config.blocks().iter().map(|b| b.n_params).sum()
}

/// Gate sequence of one SO4 block on qubits `a` (upper wire) and `b`.
///
/// `params` holds 6 angles, or 3 for a first-layer block.
pub fn so4_ops(params: &[f64], a: usize, b: usize) -> Result<Vec<GateOp>> {
    if params.len() != 3 && params.len() != 6 {
        return Err(SimError::ParameterCount {
            expected: 6,
            got: params.len(),
        });
    }
    let mut ops = vec![
        GateOp::rz(a, FRAC_PI_2),
        GateOp::rz(b, FRAC_PI_2),
        GateOp::ry(b, FRAC_PI_2),
        GateOp::cnot(b, a),
        GateOp::rz(a, params[0]),
        GateOp::ry(a, params[1]),
        GateOp::rz(a, params[2]),
    ];
    if params.len() == 6 {
        ops.extend([
            GateOp::rz(b, params[3]),
            GateOp::ry(b, params[4]),
            GateOp::rz(b, params[5]),
        ]);
    }
    ops.extend([
        GateOp::cnot(b, a),
        GateOp::ry(b, -FRAC_PI_2),
        GateOp::rz(a, -FRAC_PI_2),
        GateOp::rz(b, -FRAC_PI_2),
    ]);
    Ok(ops)
}

/// One SO4 block as a 2-qubit circuit (qubit 0 is the upper wire).
pub fn so4_block(params: &[f64]) -> Result<Circuit> {
    Circuit::from_ops(2, so4_ops(params, 0, 1)?)
}

/// The full bricklayer circuit `U(λ_c)` on `config.n_qubits` qubits.
pub fn build_ansatz(config: &AnsatzConfig, params: &[f64]) -> Result<Circuit> {
    let expected = parameter_count(config);
    if params.len() != expected {
        return Err(SimError::ParameterCount {
            expected,
            got: params.len(),
        });
    }
    let mut c = Circuit::new(config.n_qubits);
    for slot in config.blocks() {
        let p = &params[slot.first_param..slot.first_param + slot.n_params];
        c.extend(so4_ops(p, slot.low, slot.low + 1)?)?;
    }
    Ok(c)
}
