//! Term circuits: cyclic-shift adder, permutation transform, boundary
//! corrections, potential and source units.
//!
//! Every builder works on a [`Wires`] assignment so the same gate pattern can be
//! placed inside a Hadamard-test register. When `control` is set the circuit is
//! the controlled version used inside the Hadamard test, with the control wired
//! only where it is needed (carry chains inherit it through the first carry).
//! The canonical circuits place the data register at qubits `0..n`, carry qubits
//! directly above it and the control (Hadamard-test ancilla) at the top index.
//!
//! Data-register semantics (little-endian basis index `k`, entries `u_{k+1}`):
//!
//! * increment `|k⟩ → |k+1 mod 2^n⟩` — the cyclic shift and the transform `T_t`;
//! * `B` — with `C = T_t⁻¹ B T_t`, `⟨u|C|u⟩ = 2 u₁ u_{N_p}` for real `u`;
//! * `B_N` — with `C_N = T_t⁻¹ B_N T_t`, `⟨u|C_N|u⟩ = u₁² + u_{N_p}²` for real `u`.

use crate::circuit::Circuit;
use crate::decompose::mcg_decompose;
use crate::error::SimError;
use crate::gate::{GateKind, GateOp};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::state::Statevector;
use crate::Result;
use num_complex::Complex;
use std::f64::consts::PI;

/// Deep (multi-controlled, qubit-saving) or shallow (carry-qubit) realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Multi-controlled gates kept as single ops; no carry qubits.
    Deep,
    /// Multi-controlled gates replaced by Toffoli ladders over clean carries.
    Shallow,
}

impl Variant {
    /// Lower-case label (`deep` / `shallow`).
    pub fn label(self) -> &'static str {
        match self {
            Variant::Deep => "deep",
            Variant::Shallow => "shallow",
        }
    }
}

/// Register bookkeeping of one term circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QnpuLayout {
    /// Deep or shallow realization.
    pub variant: Variant,
    /// Data-register size `n`.
    pub n_data: usize,
    /// Carry qubits (`n − 2` for shallow circuits with `n > 2`, else 0).
    pub n_carry: usize,
}

impl QnpuLayout {
    /// Layout for `n` data qubits.
    pub fn new(variant: Variant, n_data: usize) -> Self {
        let n_carry = match variant {
            Variant::Shallow if n_data > 2 => n_data - 2,
            _ => 0,
        };
        Self {
            variant,
            n_data,
            n_carry,
        }
    }
}

/// Qubit assignment for a term circuit inside a larger register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wires {
    /// Data qubits, least significant first.
    pub data: Vec<usize>,
    /// Clean carry qubits (must start and end in `|0⟩`).
    pub carries: Vec<usize>,
    /// Optional control (the Hadamard-test ancilla).
    pub control: Option<usize>,
}

impl Wires {
    /// Canonical assignment: data `0..n`, carries `n..n+n_carry`, control on top.
    pub fn canonical(layout: &QnpuLayout, controlled: bool) -> Self {
        let n = layout.n_data;
        let carries: Vec<usize> = (n..n + layout.n_carry).collect();
        let control = controlled.then_some(n + layout.n_carry);
        Self {
            data: (0..n).collect(),
            carries,
            control,
        }
    }

    /// Total register size of the canonical assignment.
    pub fn span(&self) -> usize {
        self.data
            .iter()
            .chain(&self.carries)
            .chain(self.control.iter())
            .map(|&q| q + 1)
            .max()
            .unwrap_or(0)
    }

    fn n(&self) -> usize {
        self.data.len()
    }

    fn with_control(&self, mut controls: Vec<usize>) -> Vec<usize> {
        if let Some(c) = self.control {
            controls.insert(0, c);
        }
        controls
    }

    /// A single-qubit base kind under the optional control.
    fn ctl(&self, base: GateKind, target: usize) -> GateOp {
        GateOp::controlled(base, self.with_control(vec![]), target)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(SimError::InvalidSize(format!(
            "term circuits need at least 2 data qubits, got {n}"
        )));
    }
    Ok(())
}

fn need_carries(w: &Wires, need: usize) -> Result<()> {
    if w.carries.len() < need {
        return Err(SimError::InsufficientCarries {
            need,
            have: w.carries.len(),
        });
    }
    Ok(())
}

/// Increment `|k⟩ → |k+1 mod 2^n⟩` on the data register.
///
/// Deep: ladder of multi-controlled NOTs from the most significant qubit down,
/// then X on qubit 0. Shallow: the carry chain `k_j = c ∧ d_0 ∧ … ∧ d_{j−1}`
/// computed first, most significant flips performed while uncomputing the chain
/// (`n − 2` CNOTs and `2n − 2` Toffolis when controlled, `n > 2`).
pub fn increment_ops(w: &Wires, variant: Variant) -> Result<Vec<GateOp>> {
    let n = w.n();
    check_n(n)?;
    let d = &w.data;
    let mut ops = Vec::new();
    if variant == Variant::Deep || n == 2 {
        for t in (1..n).rev() {
            ops.push(GateOp::mcx(w.with_control(d[..t].to_vec()), d[t]));
        }
        ops.push(w.ctl(GateKind::X, d[0]));
        return Ok(ops);
    }
    need_carries(w, n - 2)?;
    let k = &w.carries;
    // k[j-1] holds the AND of the control and d[0..j].
    ops.push(GateOp::mcx(w.with_control(vec![d[0]]), k[0]));
    for j in 2..=n - 2 {
        ops.push(GateOp::toffoli(k[j - 2], d[j - 1], k[j - 1]));
    }
    ops.push(GateOp::toffoli(k[n - 3], d[n - 2], d[n - 1]));
    for j in (2..=n - 2).rev() {
        ops.push(GateOp::cnot(k[j - 1], d[j]));
        ops.push(GateOp::toffoli(k[j - 2], d[j - 1], k[j - 1]));
    }
    ops.push(GateOp::mcx(w.with_control(vec![d[0]]), k[0]));
    ops.push(GateOp::mcx(w.with_control(vec![d[0]]), d[1]));
    ops.push(w.ctl(GateKind::X, d[0]));
    Ok(ops)
}

/// Decrement `|k⟩ → |k−1 mod 2^n⟩`: the exact reverse of [`increment_ops`].
pub fn decrement_ops(w: &Wires, variant: Variant) -> Result<Vec<GateOp>> {
    Ok(increment_ops(w, variant)?
        .into_iter()
        .rev()
        .map(|op| op.inverse())
        .collect())
}

/// Controlled global phase −1 for odd register sizes (keeps the corner entries
/// of the assembled boundary matrices at +1 for every `n`).
fn odd_sign_fix(w: &Wires) -> Option<GateOp> {
    if w.n() % 2 == 0 {
        return None;
    }
    Some(match w.control {
        Some(c) => GateOp::z(c),
        None => GateOp::global_phase(PI),
    })
}

fn xz_prefix(w: &Wires) -> Vec<GateOp> {
    let mut ops = Vec::new();
    for &q in &w.data[1..] {
        ops.push(w.ctl(GateKind::X, q));
        ops.push(w.ctl(GateKind::Z, q));
    }
    ops
}

fn xz_suffix(w: &Wires) -> Vec<GateOp> {
    let mut ops = Vec::new();
    for &q in w.data.iter().rev() {
        ops.push(w.ctl(GateKind::X, q));
        ops.push(w.ctl(GateKind::Z, q));
    }
    ops
}

fn place_mc(op: GateOp, w: &Wires, variant: Variant) -> Result<Vec<GateOp>> {
    match variant {
        Variant::Deep => Ok(vec![op]),
        Variant::Shallow => mcg_decompose(&op, &w.carries),
    }
}

/// Boundary matrix `B` of the j_DN term.
///
/// X and Z on qubits `1..n−1`, an `n`-qubit multi-controlled Z, then X and Z on
/// every qubit from the top down. The shallow variant decomposes the
/// multi-controlled Z over `n − 2` carries.
pub fn boundary_dn_ops(w: &Wires, variant: Variant) -> Result<Vec<GateOp>> {
    let n = w.n();
    check_n(n)?;
    let d = &w.data;
    let mut ops = xz_prefix(w);
    ops.extend(place_mc(
        GateOp::mcz(w.with_control(d[..n - 1].to_vec()), d[n - 1]),
        w,
        variant,
    )?);
    ops.extend(xz_suffix(w));
    ops.extend(odd_sign_fix(w));
    Ok(ops)
}

/// Boundary matrix `B_N` of the j_N term: like `B` with an additional
/// multi-controlled NOT (controls `1..n−1`, target 0) before the multi-controlled Z.
pub fn boundary_n_ops(w: &Wires, variant: Variant) -> Result<Vec<GateOp>> {
    let n = w.n();
    check_n(n)?;
    let d = &w.data;
    let mut ops = xz_prefix(w);
    ops.extend(place_mc(
        GateOp::mcx(w.with_control(d[1..].to_vec()), d[0]),
        w,
        variant,
    )?);
    ops.extend(place_mc(
        GateOp::mcz(w.with_control(d[..n - 1].to_vec()), d[n - 1]),
        w,
        variant,
    )?);
    ops.extend(xz_suffix(w));
    ops.extend(odd_sign_fix(w));
    Ok(ops)
}

/// Potential unit: `P` prepares the normalized potential on a second register
/// (controlled by the ancilla), then each data qubit is copied onto its partner
/// register qubit by a controlled CNOT, so the Hadamard test yields
/// `Σ_k |u_k|² (P|0⟩)_k`.
pub fn potential_ops(w: &Wires, register: &[usize], p: &Circuit) -> Result<Vec<GateOp>> {
    let n = w.n();
    if p.n_qubits() != n || register.len() != n {
        return Err(SimError::QubitCountMismatch {
            expected: n,
            got: p.n_qubits().min(register.len()),
        });
    }
    let mut ops = Vec::new();
    for op in p.ops() {
        let mapped = GateOp {
            kind: op.kind.clone(),
            targets: op.targets.iter().map(|&q| register[q]).collect(),
            controls: op.controls.iter().map(|&q| register[q]).collect(),
        };
        ops.push(match w.control {
            Some(c) => crate::circuit::control_op(&mapped, c)?,
            None => mapped,
        });
    }
    for (i, &q) in w.data.iter().enumerate() {
        ops.push(GateOp::mcx(w.with_control(vec![q]), register[i]));
    }
    Ok(ops)
}

/// Source unit: `F†` on the data register (controlled), so that together with a
/// controlled ansatz the Hadamard test yields `Re⟨f̂|u⟩`.
pub fn source_ops(w: &Wires, f: &Circuit) -> Result<Vec<GateOp>> {
    if f.n_qubits() != w.n() {
        return Err(SimError::QubitCountMismatch {
            expected: w.n(),
            got: f.n_qubits(),
        });
    }
    let mut ops = Vec::new();
    for op in f.inverse().ops() {
        let mapped = GateOp {
            kind: op.kind.clone(),
            targets: op.targets.iter().map(|&q| w.data[q]).collect(),
            controls: op.controls.iter().map(|&q| w.data[q]).collect(),
        };
        ops.push(match w.control {
            Some(c) => crate::circuit::control_op(&mapped, c)?,
            None => mapped,
        });
    }
    Ok(ops)
}

fn canonical(variant: Variant, n: usize, controlled: bool) -> Result<(Wires, usize)> {
    check_n(n)?;
    let w = Wires::canonical(&QnpuLayout::new(variant, n), controlled);
    let span = w.span();
    Ok((w, span))
}

/// Controlled cyclic-shift adder (shallow, `n − 2` carries for `n > 2`).
///
/// For `n = 2` this is the half adder: a Toffoli onto qubit 1 followed by a
/// CNOT onto qubit 0, both controlled by the ancilla.
pub fn laplace_qnpu(n: usize) -> Result<Circuit> {
    laplace_qnpu_variant(n, Variant::Shallow)
}

/// Controlled cyclic-shift adder in the requested variant.
pub fn laplace_qnpu_variant(n: usize, variant: Variant) -> Result<Circuit> {
    let (w, span) = canonical(variant, n, true)?;
    Circuit::from_ops(span, increment_ops(&w, variant)?)
}

/// Uncontrolled permutation transform `T_t` (increment) on data (+ carries).
pub fn transform_tt(n: usize, variant: Variant) -> Result<Circuit> {
    let (w, span) = canonical(variant, n, false)?;
    Circuit::from_ops(span, increment_ops(&w, variant)?)
}

/// Controlled j_DN boundary circuit `B` (ancilla on top).
pub fn boundary_dn_qnpu(n: usize, variant: Variant) -> Result<Circuit> {
    let (w, span) = canonical(variant, n, true)?;
    Circuit::from_ops(span, boundary_dn_ops(&w, variant)?)
}

/// Controlled j_N boundary circuit `B_N` (ancilla on top).
pub fn boundary_n_qnpu(n: usize, variant: Variant) -> Result<Circuit> {
    let (w, span) = canonical(variant, n, true)?;
    Circuit::from_ops(span, boundary_n_ops(&w, variant)?)
}

/// Uncontrolled `B` on `n` qubits (deep), for matrix comparisons.
pub fn boundary_dn_matrix_circuit(n: usize) -> Result<Circuit> {
    let (w, span) = canonical(Variant::Deep, n, false)?;
    Circuit::from_ops(span, boundary_dn_ops(&w, Variant::Deep)?)
}

/// Uncontrolled `B_N` on `n` qubits (deep), for matrix comparisons.
pub fn boundary_n_matrix_circuit(n: usize) -> Result<Circuit> {
    let (w, span) = canonical(Variant::Deep, n, false)?;
    Circuit::from_ops(span, boundary_n_ops(&w, Variant::Deep)?)
}

/// Controlled potential unit on data `0..n`, register `n..2n`, ancilla `2n`.
pub fn potential_qnpu(n: usize, p: &Circuit) -> Result<Circuit> {
    check_n(n)?;
    let w = Wires {
        data: (0..n).collect(),
        carries: vec![],
        control: Some(2 * n),
    };
    let register: Vec<usize> = (n..2 * n).collect();
    Circuit::from_ops(2 * n + 1, potential_ops(&w, &register, p)?)
}

/// Controlled source unit `F†` on data `0..n`, ancilla `n`.
pub fn source_qnpu(n: usize, f: &Circuit) -> Result<Circuit> {
    check_n(n)?;
    let w = Wires {
        data: (0..n).collect(),
        carries: vec![],
        control: Some(n),
    };
    Circuit::from_ops(n + 1, source_ops(&w, f)?)
}

/// The unitary a circuit applies to its data register `0..n_data` when the
/// control qubit (if any) is `|1⟩` and every other qubit starts in `|0⟩`.
///
/// Fails with [`SimError::AuxiliaryLeak`] if any auxiliary qubit does not return
/// to `|0⟩` or the control is disturbed.
pub fn data_action<T: Real>(
    circuit: &Circuit,
    n_data: usize,
    control: Option<usize>,
) -> Result<CMatrix<T>> {
    let total = circuit.n_qubits();
    let dim = 1usize << n_data;
    let cbit = control.map_or(0, |c| 1usize << c);
    let keep = (dim - 1) | cbit;
    let mut m = CMatrix::zeros(dim);
    for col in 0..dim {
        let mut s = Statevector::<T>::basis(total, col | cbit);
        circuit.apply_to(&mut s)?;
        let mut leak = T::zero();
        for (b, a) in s.amplitudes().iter().enumerate() {
            if b & !keep != 0 || b & cbit != cbit {
                leak = leak + a.norm_sqr();
            }
        }
        if leak > T::of(1e-20) {
            return Err(SimError::AuxiliaryLeak(leak.to_f64_lossless()));
        }
        for row in 0..dim {
            m.set(row, col, s.amplitudes()[row | cbit]);
        }
    }
    Ok(m)
}

/// Dense increment permutation `e_k → e_{k+1 mod 2^n}`.
pub fn shift_matrix<T: Real>(n: usize) -> CMatrix<T> {
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim);
    for k in 0..dim {
        m.set((k + 1) % dim, k, Complex::new(T::one(), T::zero()));
    }
    m
}
