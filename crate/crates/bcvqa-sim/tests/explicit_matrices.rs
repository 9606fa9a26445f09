//! Exact comparison of small circuits with their explicit matrix forms.

use bcvqa_sim::gate::GateOp;
use bcvqa_sim::qnpu::{
    boundary_dn_matrix_circuit, data_action, laplace_qnpu, transform_tt, Variant,
};
use bcvqa_sim::{CMatrix64, Circuit, Statevector64};

fn exact(a: &CMatrix64, b: &CMatrix64) -> bool {
    a.max_abs_diff(b) < 1e-12
}

fn cyclic_shift_2() -> CMatrix64 {
    CMatrix64::from_real_rows(&[
        &[0.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
    ])
}

#[test]
fn half_adder_matrix() {
    let c = laplace_qnpu(2).unwrap();
    let a: CMatrix64 = data_action(&c, 2, Some(2)).unwrap();
    assert!(exact(&a, &cyclic_shift_2()));
    let plain = Circuit::from_ops(2, [GateOp::cnot(0, 1), GateOp::x(0)]).unwrap();
    let mut s = Statevector64::basis(2, 0b01);
    plain.apply_to(&mut s).unwrap();
    assert_eq!(s, Statevector64::basis(2, 0b10));
}

#[test]
fn two_qubit_transform_is_cnot_then_x() {
    let t = transform_tt(2, Variant::Deep).unwrap();
    assert_eq!(t.ops(), &[GateOp::cnot(0, 1), GateOp::x(0)]);
    assert!(exact(&t.to_matrix(2).unwrap(), &cyclic_shift_2()));
}

#[test]
fn two_qubit_boundary_matrices() {
    let b: CMatrix64 = boundary_dn_matrix_circuit(2).unwrap().to_matrix(2).unwrap();
    let expected_b = CMatrix64::from_real_rows(&[
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ]);
    assert!(exact(&b, &expected_b));
    let t = cyclic_shift_2();
    let c = t.dagger().matmul(&b).matmul(&t);
    let expected_c = CMatrix64::from_real_rows(&[
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, -1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
    ]);
    assert!(exact(&c, &expected_c));
}

#[test]
fn four_qubit_boundary_matrix_block_structure() {
    // Diagonal blocks: ∓1 pairs on the first off-diagonals of rows 1..6;
    // off-diagonal blocks: anti-corner entries (+1, −1) and (+1, +1).
    let mut rows = vec![vec![0.0; 16]; 16];
    for base in [0, 8] {
        for m in [1, 3, 5] {
            rows[base + m][base + m + 1] = -1.0;
            rows[base + m + 1][base + m] = 1.0;
        }
    }
    rows[0][15] = 1.0;
    rows[7][8] = -1.0;
    rows[8][7] = 1.0;
    rows[15][0] = 1.0;
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    let expected = CMatrix64::from_real_rows(&refs);

    let t: CMatrix64 = transform_tt(4, Variant::Deep)
        .unwrap()
        .to_matrix(4)
        .unwrap();
    let b: CMatrix64 = boundary_dn_matrix_circuit(4).unwrap().to_matrix(4).unwrap();
    let c = t.dagger().matmul(&b).matmul(&t);
    assert!(exact(&c, &expected));
}
