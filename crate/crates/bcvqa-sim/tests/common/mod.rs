//! Independent dense oracles shared by the integration tests.
#![allow(dead_code)]

use bcvqa_sim::gate::GateOp;
use bcvqa_sim::{CMatrix64, Circuit, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense matrix of one op on an `n`-qubit register, built directly from the
/// definition `I + Π_controls ⊗ (U − I)` on basis indices.
pub fn op_matrix(op: &GateOp, n: usize) -> CMatrix64 {
    let dim = 1usize << n;
    if let bcvqa_sim::GateKind::GlobalPhase(t) = op.kind {
        return CMatrix64::identity(dim).scale_complex(C64::from_polar(1.0, t));
    }
    let u = op.kind.base().single_matrix().expect("single-qubit base");
    let t = op.targets[0];
    let cmask: usize = op.controls.iter().map(|c| 1usize << c).sum();
    let mut m = CMatrix64::zeros(dim);
    for col in 0..dim {
        if col & cmask != cmask {
            m.set(col, col, C64::new(1.0, 0.0));
            continue;
        }
        let bit = (col >> t) & 1;
        for out in 0..2 {
            let row = (col & !(1 << t)) | (out << t);
            m.set(row, col, u[out][bit]);
        }
    }
    m
}

/// Dense matrix of a circuit as the ordered product of [`op_matrix`] factors.
pub fn circuit_matrix(c: &Circuit) -> CMatrix64 {
    let mut m = CMatrix64::identity(1 << c.n_qubits());
    for op in c.ops() {
        m = op_matrix(op, c.n_qubits()).matmul(&m);
    }
    m
}

/// Max |a − b| after removing the global phase of `b` relative to `a`.
pub fn diff_up_to_phase(a: &CMatrix64, b: &CMatrix64) -> f64 {
    let dim = a.dim();
    let mut phase = C64::new(1.0, 0.0);
    'outer: for r in 0..dim {
        for c in 0..dim {
            if a.get(r, c).norm() > 1e-6 {
                phase = a.get(r, c) / b.get(r, c);
                break 'outer;
            }
        }
    }
    a.max_abs_diff(&b.scale_complex(phase))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random real unit vector of length `len`.
pub fn random_unit(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Random 2×2 unitary `e^{ia} Rz(b) Ry(c) Rz(d)` built from explicit formulas.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> [[C64; 2]; 2] {
    let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
    let g = C64::from_polar(1.0, a);
    let (s, co) = (c / 2.0).sin_cos();
    [
        [
            g * C64::from_polar(co, -(b + d) / 2.0),
            g * C64::from_polar(-s, (d - b) / 2.0),
        ],
        [
            g * C64::from_polar(s, (b - d) / 2.0),
            g * C64::from_polar(co, (b + d) / 2.0),
        ],
    ]
}
