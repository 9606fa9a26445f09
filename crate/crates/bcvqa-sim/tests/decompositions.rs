//! Multi-controlled gate decompositions verified by matrix equality.

mod common;

use bcvqa_sim::decompose::{lower_to_two_qubit, mcg_decompose, mcx_dirty, zyz_angles};
use bcvqa_sim::gate::GateOp;
use bcvqa_sim::qnpu::data_action;
use bcvqa_sim::{CMatrix64, Circuit, GateKind};
use common::{circuit_matrix, diff_up_to_phase, op_matrix, random_unitary, rng};
use std::f64::consts::PI;

fn lowered_matrix(op: &GateOp, n: usize) -> CMatrix64 {
    let ops = lower_to_two_qubit(op).unwrap();
    assert!(
        ops.iter().all(|o| o.arity() <= 2),
        "{} left a wide gate",
        op.kind.name()
    );
    circuit_matrix(&Circuit::from_ops(n, ops).unwrap())
}

#[test]
fn toffoli_and_ccz_identities_are_exact() {
    for base in [GateKind::X, GateKind::Z] {
        let op = GateOp::controlled(base, vec![0, 1], 2);
        let lowered = lower_to_two_qubit(&op).unwrap();
        assert_eq!(
            lowered.iter().filter(|o| o.kind == GateKind::CNOT).count(),
            6
        );
        assert!(lowered_matrix(&op, 3).max_abs_diff(&op_matrix(&op, 3)) < 1e-12);
    }
}

#[test]
fn euler_angles_reconstruct_random_unitaries() {
    let mut g = rng(1);
    for _ in 0..50 {
        let u = random_unitary(&mut g);
        let (a, b, c, d) = zyz_angles(&u);
        let rebuilt = Circuit::from_ops(
            1,
            [
                GateOp::rz(0, d),
                GateOp::ry(0, c),
                GateOp::rz(0, b),
                GateOp::global_phase(a),
            ],
        )
        .unwrap();
        let m = circuit_matrix(&rebuilt);
        for r in 0..2 {
            for col in 0..2 {
                assert!((m.get(r, col) - u[r][col]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn singly_controlled_gates_lower_exactly() {
    let mut g = rng(2);
    let bases = vec![
        GateKind::Ry(0.7),
        GateKind::Rz(-1.3),
        GateKind::Phase(2.1),
        GateKind::H,
        GateKind::Y,
        GateKind::Unitary(random_unitary(&mut g)),
    ];
    for base in bases {
        let op = GateOp::controlled(base.clone(), vec![1], 0);
        assert!(
            lowered_matrix(&op, 2).max_abs_diff(&op_matrix(&op, 2)) < 1e-12,
            "{}",
            base.name()
        );
    }
}

#[test]
fn many_controlled_gates_lower_exactly() {
    let mut g = rng(3);
    for m in 2..=5 {
        let n = m + 1;
        let controls: Vec<usize> = (0..m).rev().collect();
        for base in [
            GateKind::X,
            GateKind::Z,
            GateKind::Ry(1.1),
            GateKind::Unitary(random_unitary(&mut g)),
        ] {
            let op = GateOp::controlled(base.clone(), controls.clone(), m);
            let got = lowered_matrix(&op, n);
            assert!(
                got.max_abs_diff(&op_matrix(&op, n)) < 1e-10,
                "m={m} {}",
                base.name()
            );
        }
    }
}

#[test]
fn dirty_ancilla_mcx_is_exact_on_the_full_space() {
    for k in 3..=5 {
        let controls: Vec<usize> = (0..k).collect();
        let target = k;
        let total = k + 1 + (k - 2);
        let dirty: Vec<usize> = (k + 1..total).collect();
        let want = op_matrix(&GateOp::mcx(controls.clone(), target), total);
        for n_dirty in [k - 2, 1] {
            let ops = mcx_dirty(&controls, target, &dirty[..n_dirty]).unwrap();
            assert!(ops
                .iter()
                .all(|o| matches!(o.kind, GateKind::Toffoli | GateKind::CNOT)));
            if n_dirty == k - 2 {
                assert_eq!(ops.len(), 4 * (k - 2), "V-chain length k={k}");
            }
            let got = circuit_matrix(&Circuit::from_ops(total, ops).unwrap());
            assert!(got.max_abs_diff(&want) < 1e-12, "k={k} dirty={n_dirty}");
        }
    }
    assert!(mcx_dirty(&[0, 1, 2], 3, &[]).is_err());
}

#[test]
fn clean_carry_ladder_matches_on_the_carry_zero_subspace() {
    for m in 3..=6 {
        for base in [GateKind::X, GateKind::Z, GateKind::Rz(0.4)] {
            let op = GateOp::controlled(base.clone(), (0..m).collect(), m);
            let carries: Vec<usize> = (m + 1..2 * m - 1).collect();
            let ops = mcg_decompose(&op, &carries).unwrap();
            let ladder = ops.len() - 1;
            assert_eq!(ladder, 2 * (m - 2));
            assert!(ops[..m - 2]
                .iter()
                .chain(&ops[m - 1..])
                .all(|o| o.kind == GateKind::Toffoli));
            assert_eq!(ops[m - 2].controls.len(), 2);
            let c = Circuit::from_ops(2 * m - 1, ops).unwrap();
            let got: CMatrix64 = data_action(&c, m + 1, None).unwrap();
            assert!(
                got.max_abs_diff(&op_matrix(&op, m + 1)) < 1e-12,
                "m={m} {}",
                base.name()
            );
        }
    }
    let six = GateOp::mcx((0..6).collect(), 6);
    let ops = mcg_decompose(&six, &[7, 8, 9, 10]).unwrap();
    // Eight ladder Toffolis around the central doubly controlled NOT.
    assert_eq!(
        ops.iter().filter(|o| o.kind == GateKind::Toffoli).count(),
        8 + 1
    );
    assert!(mcg_decompose(&six, &[7, 8]).is_err());
}

#[test]
fn phase_fix_is_a_global_phase_when_uncontrolled() {
    let a = op_matrix(&GateOp::global_phase(PI), 1);
    let b = CMatrix64::identity(2);
    assert!(diff_up_to_phase(&a, &b) < 1e-15);
    assert!(a.max_abs_diff(&b) > 1.0);
}
