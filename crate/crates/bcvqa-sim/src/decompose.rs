//! Multi-controlled gate decompositions.
//!
//! Two families are provided:
//!
//! * [`mcg_decompose`] — a multi-controlled gate over clean carry qubits: a
//!   Toffoli ladder computes the AND of all but the last control, a doubly
//!   controlled gate acts on the target, and the ladder is uncomputed
//!   (`2(m − 2)` Toffolis for `m ≥ 3` controls);
//! * [`lower_to_two_qubit`] — an exact rewrite of any op into gates acting on at
//!   most two qubits, used for resource counting. Toffoli and CCZ use the
//!   standard 6-CNOT identities, singly controlled gates the `A·X·B·X·C`
//!   construction, doubly controlled gates the square-root construction, and
//!   gates with three or more controls the square-root recursion that borrows
//!   the target as a dirty qubit for the inner multi-controlled NOTs. When a
//!   circuit is lowered, multi-controlled NOT and Z gates may also borrow idle
//!   register qubits, which makes their cost linear in the control count.

use crate::circuit::Circuit;
use crate::error::SimError;
use crate::gate::{mat2_dagger, mat2_mul, mat2_sqrt, GateKind, GateOp, Mat2, C64};
use crate::Result;
use std::f64::consts::FRAC_PI_4;

/// Rewrites an op with `m ≥ 3` controls as a Toffoli ladder over clean carries,
/// a doubly controlled base gate and the mirrored ladder.
///
/// Ops with at most two controls are returned unchanged. Needs `m − 2` carries,
/// which must be `|0⟩` on entry and are returned to `|0⟩`.
pub fn mcg_decompose(op: &GateOp, carries: &[usize]) -> Result<Vec<GateOp>> {
    let m = op.controls.len();
    if m <= 2 || matches!(op.kind, GateKind::GlobalPhase(_)) {
        return Ok(vec![op.clone()]);
    }
    if carries.len() < m - 2 {
        return Err(SimError::InsufficientCarries {
            need: m - 2,
            have: carries.len(),
        });
    }
    let c = &op.controls;
    let mut ladder = vec![GateOp::toffoli(c[0], c[1], carries[0])];
    for j in 1..m - 2 {
        ladder.push(GateOp::toffoli(c[j + 1], carries[j - 1], carries[j]));
    }
    let mut ops = ladder.clone();
    ops.push(GateOp::controlled(
        op.kind.base(),
        vec![carries[m - 3], c[m - 1]],
        op.targets[0],
    ));
    ops.extend(ladder.into_iter().rev());
    Ok(ops)
}

/// Multi-controlled NOT onto `target` using `dirty` qubits in arbitrary states
/// (restored on exit). Produces only CNOTs and Toffolis.
///
/// With at least `k − 2` dirty qubits the Toffoli V-chain (`4(k − 2)` Toffolis)
/// is used; with fewer the controls are split in two halves around one borrowed
/// qubit. Fails if `k ≥ 3` and no dirty qubit is available.
pub fn mcx_dirty(controls: &[usize], target: usize, dirty: &[usize]) -> Result<Vec<GateOp>> {
    let k = controls.len();
    match k {
        0 => return Ok(vec![GateOp::x(target)]),
        1 => return Ok(vec![GateOp::cnot(controls[0], target)]),
        2 => return Ok(vec![GateOp::toffoli(controls[0], controls[1], target)]),
        _ => {}
    }
    if dirty.len() >= k - 2 {
        return Ok(v_chain(controls, target, &dirty[..k - 2]));
    }
    let Some(&b) = dirty.first() else {
        return Err(SimError::InsufficientCarries { need: 1, have: 0 });
    };
    let k1 = k.div_ceil(2);
    let (a, rest) = controls.split_at(k1);
    let mut dirty1: Vec<usize> = rest.to_vec();
    dirty1.push(target);
    let g1 = mcx_dirty(a, b, &dirty1)?;
    let mut c2: Vec<usize> = rest.to_vec();
    c2.push(b);
    let g2 = mcx_dirty(&c2, target, a)?;
    let mut ops = Vec::with_capacity(2 * (g1.len() + g2.len()));
    for _ in 0..2 {
        ops.extend(g1.iter().cloned());
        ops.extend(g2.iter().cloned());
    }
    Ok(ops)
}

/// Toffoli V-chain for `k ≥ 3` controls with exactly `k − 2` dirty qubits.
fn v_chain(c: &[usize], t: usize, a: &[usize]) -> Vec<GateOp> {
    let k = c.len();
    let top = GateOp::toffoli(c[k - 1], a[k - 3], t);
    let down: Vec<GateOp> = (1..k - 2)
        .rev()
        .map(|i| GateOp::toffoli(c[i + 1], a[i - 1], a[i]))
        .collect();
    let up: Vec<GateOp> = (1..k - 2)
        .map(|i| GateOp::toffoli(c[i + 1], a[i - 1], a[i]))
        .collect();
    let base = GateOp::toffoli(c[0], c[1], a[0]);
    let mut ops = Vec::with_capacity(4 * (k - 2));
    for _ in 0..2 {
        ops.push(top.clone());
        ops.extend(down.iter().cloned());
        ops.push(base.clone());
        ops.extend(up.iter().cloned());
    }
    ops
}

/// Euler angles `(α, β, γ, δ)` with `U = e^{iα} Rz(β) Ry(γ) Rz(δ)`.
pub fn zyz_angles(u: &Mat2) -> (f64, f64, f64, f64) {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let alpha = det.arg() / 2.0;
    let ph = C64::from_polar(1.0, -alpha);
    let (a, b) = (u[0][0] * ph, u[1][0] * ph);
    let gamma = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-14 {
        -2.0 * a.arg()
    } else {
        0.0
    };
    let diff = if b.norm() > 1e-14 { 2.0 * b.arg() } else { 0.0 };
    (alpha, (sum + diff) / 2.0, gamma, (sum - diff) / 2.0)
}

fn m2(kind: GateKind) -> Mat2 {
    kind.single_matrix().expect("single-qubit kind")
}

/// Singly controlled single-qubit gate as at most two-qubit gates.
fn lower_single_control(base: &GateKind, c: usize, t: usize) -> Vec<GateOp> {
    match *base {
        GateKind::X => vec![GateOp::cnot(c, t)],
        GateKind::Z => vec![GateOp::cz(c, t)],
        GateKind::I => vec![],
        GateKind::Rz(th) => vec![
            GateOp::rz(t, th / 2.0),
            GateOp::cnot(c, t),
            GateOp::rz(t, -th / 2.0),
            GateOp::cnot(c, t),
        ],
        GateKind::Ry(th) => vec![
            GateOp::ry(t, th / 2.0),
            GateOp::cnot(c, t),
            GateOp::ry(t, -th / 2.0),
            GateOp::cnot(c, t),
        ],
        GateKind::Phase(th) => vec![
            GateOp::phase(c, th / 2.0),
            GateOp::rz(t, th / 2.0),
            GateOp::cnot(c, t),
            GateOp::rz(t, -th / 2.0),
            GateOp::cnot(c, t),
        ],
        _ => {
            let (alpha, beta, gamma, delta) = zyz_angles(&m2(base.clone()));
            let a = mat2_mul(&m2(GateKind::Rz(beta)), &m2(GateKind::Ry(gamma / 2.0)));
            let b = mat2_mul(
                &m2(GateKind::Ry(-gamma / 2.0)),
                &m2(GateKind::Rz(-(delta + beta) / 2.0)),
            );
            let cm = m2(GateKind::Rz((delta - beta) / 2.0));
            vec![
                GateOp::single(GateKind::Unitary(cm), t),
                GateOp::cnot(c, t),
                GateOp::single(GateKind::Unitary(b), t),
                GateOp::cnot(c, t),
                GateOp::single(GateKind::Unitary(a), t),
                GateOp::phase(c, alpha),
            ]
        }
    }
}

/// Toffoli (or CCZ when `with_h` is false) as 6 CNOTs and single-qubit gates.
fn toffoli_identity(c1: usize, c2: usize, t: usize, with_h: bool) -> Vec<GateOp> {
    let tg = |q| GateOp::phase(q, FRAC_PI_4);
    let tdg = |q| GateOp::phase(q, -FRAC_PI_4);
    let mut ops = Vec::with_capacity(15);
    if with_h {
        ops.push(GateOp::h(t));
    }
    ops.extend([
        GateOp::cnot(c2, t),
        tdg(t),
        GateOp::cnot(c1, t),
        tg(t),
        GateOp::cnot(c2, t),
        tdg(t),
        GateOp::cnot(c1, t),
        tg(c2),
        tg(t),
    ]);
    if with_h {
        ops.push(GateOp::h(t));
    }
    ops.extend([GateOp::cnot(c1, c2), tg(c1), tdg(c2), GateOp::cnot(c1, c2)]);
    ops
}

/// One rewriting step for an op with two or more controls (result may still
/// contain ops on three or more qubits).
fn expand_multi(base: &GateKind, controls: &[usize], t: usize) -> Result<Vec<GateOp>> {
    let m = controls.len();
    if m == 2 {
        match base {
            GateKind::X => return Ok(toffoli_identity(controls[0], controls[1], t, true)),
            GateKind::Z => return Ok(toffoli_identity(controls[0], controls[1], t, false)),
            _ => {}
        }
    }
    let u = m2(base.clone());
    let v = mat2_sqrt(&u);
    let vd = mat2_dagger(&v);
    let last = controls[m - 1];
    let rest = &controls[..m - 1];
    let mut ops = vec![GateOp::controlled(GateKind::Unitary(v), vec![last], t)];
    let flip = if m == 2 {
        vec![GateOp::cnot(rest[0], last)]
    } else {
        mcx_dirty(rest, last, &[t])?
    };
    ops.extend(flip.iter().cloned());
    ops.push(GateOp::controlled(GateKind::Unitary(vd), vec![last], t));
    ops.extend(flip);
    ops.push(GateOp::controlled(GateKind::Unitary(v), rest.to_vec(), t));
    Ok(ops)
}

/// Exact rewrite of one op into gates on at most two qubits.
pub fn lower_to_two_qubit(op: &GateOp) -> Result<Vec<GateOp>> {
    lower_with_borrowed(op, &[])
}

/// Exact rewrite of one op into gates on at most two qubits, borrowing the
/// listed idle qubits (in any state, restored on exit) for multi-controlled
/// NOT and Z gates. With at least one borrowed qubit these cost a number of
/// gates linear in the control count.
pub fn lower_with_borrowed(op: &GateOp, borrowable: &[usize]) -> Result<Vec<GateOp>> {
    if op.arity() <= 2 && !matches!(op.kind, GateKind::ControlledGeneric(_)) {
        return Ok(vec![op.clone()]);
    }
    let base = op.kind.base();
    let t = op.targets[0];
    let m = op.controls.len();
    let step = if m == 1 {
        return Ok(lower_single_control(&base, op.controls[0], t));
    } else if m >= 3 && !borrowable.is_empty() && matches!(base, GateKind::X | GateKind::Z) {
        let free: Vec<usize> = borrowable
            .iter()
            .copied()
            .filter(|&q| q != t && !op.controls.contains(&q))
            .collect();
        let mcx = mcx_dirty(&op.controls, t, &free)?;
        if base == GateKind::Z {
            let mut v = vec![GateOp::h(t)];
            v.extend(mcx);
            v.push(GateOp::h(t));
            v
        } else {
            mcx
        }
    } else {
        expand_multi(&base, &op.controls, t)?
    };
    let mut out = Vec::new();
    for inner in &step {
        out.extend(lower_with_borrowed(inner, &[])?);
    }
    Ok(out)
}

/// Lowers every op of a circuit, letting each op borrow the register qubits it
/// does not touch.
pub fn lower_circuit(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.n_qubits());
    for op in circuit.ops() {
        let idle: Vec<usize> = (0..circuit.n_qubits())
            .filter(|&q| !op.qubits().any(|u| u == q))
            .collect();
        out.extend(lower_with_borrowed(op, &idle)?)?;
    }
    Ok(out)
}
