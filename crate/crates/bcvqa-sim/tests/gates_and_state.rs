//! Gate matrices, statevector kernels and circuit algebra against dense oracles.

mod common;

use bcvqa_sim::gate::GateOp;
use bcvqa_sim::{
    gate_matrix, CMatrix64, Circuit, GateKind, Statevector, Statevector32, Statevector64, C64,
};
use common::{circuit_matrix, op_matrix, random_unitary, rng};
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn cnot_matrix_is_little_endian_with_control_on_qubit_zero() {
    let m: CMatrix64 = gate_matrix(&GateKind::CNOT).unwrap();
    let expected = CMatrix64::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
    ]);
    assert!(m.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn toffoli_matrix_swaps_only_the_all_controls_set_pair() {
    let m: CMatrix64 = gate_matrix(&GateKind::Toffoli).unwrap();
    for col in 0..8usize {
        let row = if col & 3 == 3 { col ^ 4 } else { col };
        for rr in 0..8 {
            let want = if rr == row { 1.0 } else { 0.0 };
            assert_eq!(m.get(rr, col), r(want), "entry ({rr},{col})");
        }
    }
}

#[test]
fn rotation_and_phase_definitions() {
    let t = 0.731;
    let ry: CMatrix64 = gate_matrix(&GateKind::Ry(t)).unwrap();
    let (s, c) = (t / 2.0).sin_cos();
    assert!(ry.max_abs_diff(&CMatrix64::from_real_rows(&[&[c, -s], &[s, c]])) < 1e-15);
    let rz: CMatrix64 = gate_matrix(&GateKind::Rz(t)).unwrap();
    assert!((rz.get(0, 0) - C64::from_polar(1.0, -t / 2.0)).norm() < 1e-15);
    assert!((rz.get(1, 1) - C64::from_polar(1.0, t / 2.0)).norm() < 1e-15);
    let p: CMatrix64 = gate_matrix(&GateKind::Phase(t)).unwrap();
    assert!((p.get(1, 1) - C64::from_polar(1.0, t)).norm() < 1e-15);
    let h: CMatrix64 = gate_matrix(&GateKind::H).unwrap();
    assert!((h.get(1, 1) + r(FRAC_1_SQRT_2)).norm() < 1e-15);
}

#[test]
fn multi_controlled_kinds_have_no_fixed_matrix() {
    assert!(gate_matrix::<f64>(&GateKind::MultiControlledX).is_err());
}

#[test]
fn invalid_ops_are_rejected() {
    let mut c = Circuit::new(3);
    assert!(c.push(GateOp::cnot(1, 1)).is_err());
    assert!(c.push(GateOp::x(3)).is_err());
    assert!(c
        .push(GateOp {
            kind: GateKind::Toffoli,
            targets: vec![2],
            controls: vec![0]
        })
        .is_err());
    assert!(c.push(GateOp::toffoli(0, 1, 2)).is_ok());
}

#[test]
fn hadamard_ancilla_expectation_is_read_exactly() {
    let mut s = Statevector64::zero(2);
    s.apply(&GateOp::h(1)).unwrap();
    assert!(s.ancilla_expectation(1).unwrap().abs() < 1e-15);
    s.apply(&GateOp::h(1)).unwrap();
    assert!((s.ancilla_expectation(1).unwrap() - 1.0).abs() < 1e-15);
    s.apply(&GateOp::x(1)).unwrap();
    assert!((s.ancilla_expectation(1).unwrap() + 1.0).abs() < 1e-15);
}

fn random_circuit(seed: u64, n: usize, len: usize) -> Circuit {
    let mut g = rng(seed);
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let t = g.gen_range(0..n);
        let others: Vec<usize> = (0..n).filter(|&q| q != t).collect();
        let n_ctl = g.gen_range(0..=others.len().min(3));
        let mut controls = Vec::new();
        for _ in 0..n_ctl {
            let q = others[g.gen_range(0..others.len())];
            if !controls.contains(&q) {
                controls.push(q);
            }
        }
        let base = match g.gen_range(0..8) {
            0 => GateKind::X,
            1 => GateKind::Y,
            2 => GateKind::Z,
            3 => GateKind::H,
            4 => GateKind::Ry(g.gen_range(-PI..PI)),
            5 => GateKind::Rz(g.gen_range(-PI..PI)),
            6 => GateKind::Phase(g.gen_range(-PI..PI)),
            _ => GateKind::Unitary(random_unitary(&mut g)),
        };
        c.push(GateOp::controlled(base, controls, t)).unwrap();
    }
    c.push(GateOp::global_phase(0.3)).unwrap();
    c
}

proptest! {
    #[test]
    fn statevector_kernel_matches_dense_oracle(seed in 0u64..10_000, n in 1usize..5) {
        let c = random_circuit(seed, n, 12);
        let m: CMatrix64 = c.to_matrix(8).unwrap();
        prop_assert!(m.max_abs_diff(&circuit_matrix(&c)) < 1e-12);
        prop_assert!(m.is_unitary(1e-12));
    }

    #[test]
    fn inverse_circuit_undoes_the_circuit(seed in 0u64..10_000, n in 1usize..6) {
        let c = random_circuit(seed, n, 15);
        let mut s = Statevector64::basis(n, (seed as usize) % (1 << n));
        let before = s.clone();
        c.apply_to(&mut s).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        c.inverse().apply_to(&mut s).unwrap();
        let overlap = before.inner(&s).unwrap();
        prop_assert!((overlap - r(1.0)).norm() < 1e-12);
    }
}

#[test]
fn controlled_circuit_has_block_structure() {
    let inner = random_circuit(7, 3, 10);
    let map = [0, 1, 2];
    let controlled = inner.remap(&map, 4).unwrap().controlled_by(3).unwrap();
    let u = circuit_matrix(&inner);
    let cu: CMatrix64 = controlled.to_matrix(8).unwrap();
    for row in 0..16 {
        for col in 0..16 {
            let expected = match (row >> 3, col >> 3) {
                (0, 0) => r(if row == col { 1.0 } else { 0.0 }),
                (1, 1) => u.get(row & 7, col & 7),
                _ => r(0.0),
            };
            assert!(
                (cu.get(row, col) - expected).norm() < 1e-12,
                "({row},{col})"
            );
        }
    }
}

#[test]
fn single_op_oracle_agrees_with_fixed_gate_matrices() {
    for kind in [GateKind::CNOT, GateKind::CZ, GateKind::Toffoli] {
        let n_controls = if kind == GateKind::Toffoli { 2 } else { 1 };
        let op = GateOp {
            kind: kind.clone(),
            targets: vec![n_controls],
            controls: (0..n_controls).collect(),
        };
        let m: CMatrix64 = gate_matrix(&kind).unwrap();
        assert!(m.max_abs_diff(&op_matrix(&op, n_controls + 1)) < 1e-15);
    }
}

#[test]
fn embedding_places_state_on_low_qubits() {
    let s = Statevector64::from_real(&[0.6, 0.8]).unwrap();
    let e = s.embed(3).unwrap();
    assert_eq!(e.len(), 8);
    assert_eq!(e.amplitudes()[1], r(0.8));
    assert!(e.weight_outside(0b110) == 0.0);
}

#[test]
fn single_precision_instantiation_tracks_double_precision() {
    let c = random_circuit(11, 4, 20);
    let s64: Statevector64 = c.run().unwrap();
    let s32: Statevector32 = c.run().unwrap();
    for (a, b) in s64.amplitudes().iter().zip(s32.amplitudes()) {
        assert!((a.re - b.re as f64).abs() < 1e-5 && (a.im - b.im as f64).abs() < 1e-5);
    }
    let _: Statevector<f32> = s32;
}

#[test]
fn from_amplitudes_requires_power_of_two_length() {
    assert!(Statevector64::from_real(&[1.0, 0.0, 0.0]).is_err());
    let mut z = Statevector64::from_real(&[0.0, 0.0]).unwrap();
    assert!(z.normalize().is_err());
}
