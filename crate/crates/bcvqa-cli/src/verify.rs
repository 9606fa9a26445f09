//! The `verify` command: matrix-level self-checks of the term circuits.
//!
//! Every check compares circuit-derived matrices or expectations with dense
//! objects built here from index arithmetic.

use bcvqa_sim::census::{census_row, CensusKind};
use bcvqa_sim::qnpu::{
    boundary_dn_matrix_circuit, boundary_dn_qnpu, boundary_n_qnpu, data_action, laplace_qnpu,
    laplace_qnpu_variant, transform_tt, Variant,
};
use bcvqa_sim::{build_ansatz, gate_census, parameter_count, AnsatzConfig, CMatrix64};
use bcvqa_solver::{evaluate_term, Layout, TermCircuit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    /// Short identifier.
    pub name: &'static str,
    /// Whether it passed.
    pub passed: bool,
    /// Largest deviation seen (0 for exact/count checks).
    pub max_error: f64,
    /// Tolerance applied.
    pub tolerance: f64,
}

impl CheckOutcome {
    fn within(name: &'static str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }

    fn exact(name: &'static str, ok: bool) -> Self {
        Self {
            name,
            passed: ok,
            max_error: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
        }
    }
}

/// Cyclic shift `e_k → e_{(k+1) mod 2^n}`.
fn shift(n: usize) -> CMatrix64 {
    let dim = 1usize << n;
    let mut rows = vec![vec![0.0; dim]; dim];
    for k in 0..dim {
        rows[(k + 1) % dim][k] = 1.0;
    }
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    CMatrix64::from_real_rows(&refs)
}

fn diff(a: &CMatrix64, b: &CMatrix64) -> f64 {
    a.max_abs_diff(b)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> (bcvqa_sim::Circuit, Vec<f64>) {
    let cfg = AnsatzConfig::new(n, 3).expect("valid ansatz");
    let params: Vec<f64> = (0..parameter_count(&cfg))
        .map(|_| rng.gen_range(0.0..4.0 * std::f64::consts::PI))
        .collect();
    let c = build_ansatz(&cfg, &params).expect("valid parameters");
    let u = c.run::<f64>().expect("simulation").real_parts();
    (c, u)
}

fn half_adder() -> CheckOutcome {
    let c = laplace_qnpu(2).expect("adder");
    let a: CMatrix64 = data_action(&c, 2, Some(2)).expect("data action");
    CheckOutcome::within("half-adder", diff(&a, &shift(2)), 1e-12)
}

fn two_qubit_matrices() -> CheckOutcome {
    let t: CMatrix64 = transform_tt(2, Variant::Deep)
        .and_then(|c| c.to_matrix(2))
        .expect("transform");
    let b: CMatrix64 = boundary_dn_matrix_circuit(2)
        .and_then(|c| c.to_matrix(2))
        .expect("boundary");
    let expected_b = CMatrix64::from_real_rows(&[
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ]);
    let expected_c = CMatrix64::from_real_rows(&[
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, -1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
    ]);
    let c = t.dagger().matmul(&b).matmul(&t);
    let err = diff(&t, &shift(2))
        .max(diff(&b, &expected_b))
        .max(diff(&c, &expected_c));
    CheckOutcome::within("two-qubit-t-b-c", err, 1e-12)
}

/// Four-qubit `T⁻¹BT`: two antisymmetric diagonal blocks plus corner entries.
fn four_qubit_block_structure() -> CheckOutcome {
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
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let expected = CMatrix64::from_real_rows(&refs);
    let c = conjugated_circuit(4).map_or(f64::INFINITY, |c| diff(&c, &expected));
    CheckOutcome::within("four-qubit-c-blocks", c, 1e-12)
}

/// Matrix of the circuit `T; B; T⁻¹` (transform, boundary block, inverse).
fn conjugated_circuit(n: usize) -> bcvqa_sim::Result<CMatrix64> {
    let t = transform_tt(n, Variant::Deep)?;
    let b = boundary_dn_matrix_circuit(n)?;
    let span = t.n_qubits().max(b.n_qubits());
    let widen = |c: &bcvqa_sim::Circuit| c.remap(&(0..c.n_qubits()).collect::<Vec<_>>(), span);
    let mut all = widen(&t)?;
    all.append(&widen(&b)?)?;
    all.append(&widen(&t.inverse())?)?;
    data_action(&all, n, None)
}

/// The composed circuit equals the dense product `T⁻¹BT` with `T` the cyclic shift.
fn conjugation_identity() -> CheckOutcome {
    let mut err: f64 = 0.0;
    for n in 2..=4 {
        let t = shift(n);
        let want = data_action(&boundary_dn_matrix_circuit(n).expect("B"), n, None)
            .map(|b: CMatrix64| t.dagger().matmul(&b).matmul(&t));
        err = match (conjugated_circuit(n), want) {
            (Ok(got), Ok(want)) => err.max(diff(&got, &want)),
            _ => f64::INFINITY,
        };
    }
    CheckOutcome::within("c-equals-t-inverse-b-t", err, 1e-12)
}

fn hadamard_semantics() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut err: f64 = 0.0;
    for n in 2..=4 {
        let t = || transform_tt(n, Variant::Deep).expect("T");
        let dn = TermCircuit::transformed(
            t(),
            boundary_dn_qnpu(n, Variant::Deep).expect("dn"),
            Layout::Reversing,
        );
        let nn = TermCircuit::transformed(
            t(),
            boundary_n_qnpu(n, Variant::Deep).expect("n"),
            Layout::Reversing,
        );
        let lap = TermCircuit::plain(laplace_qnpu_variant(n, Variant::Deep).expect("adder"));
        for _ in 0..50 {
            let (c, u) = random_state(&mut rng, n);
            let last = u.len() - 1;
            let j_dn = evaluate_term(&dn.with_ansatz(c.clone())).expect("j_DN");
            let j_n = evaluate_term(&nn.with_ansatz(c.clone())).expect("j_N");
            let j_l = evaluate_term(&lap.with_ansatz(c)).expect("j_L");
            // u†(S + Sᵀ − 2I)u from the dense stencil.
            let dense: f64 = (0..u.len())
                .map(|k| 2.0 * u[k] * u[(k + 1) % u.len()] - 2.0 * u[k] * u[k])
                .sum();
            err = err
                .max((j_dn - 2.0 * u[0] * u[last]).abs())
                .max((j_n - (u[0] * u[0] + u[last] * u[last])).abs())
                .max((2.0 * j_l - 2.0 - dense).abs());
        }
    }
    CheckOutcome::within("hadamard-semantics", err, 1e-10)
}

fn variant_equivalence() -> CheckOutcome {
    let mut err: f64 = 0.0;
    for n in 3..=5 {
        for build in [boundary_dn_qnpu, boundary_n_qnpu, laplace_qnpu_variant] {
            let deep = build(n, Variant::Deep).expect("deep");
            let shallow = build(n, Variant::Shallow).expect("shallow");
            let d: CMatrix64 =
                data_action(&deep, n, Some(deep.n_qubits() - 1)).expect("deep action");
            // data_action fails if a carry is left dirty.
            match data_action::<f64>(&shallow, n, Some(shallow.n_qubits() - 1)) {
                Ok(s) => err = err.max(diff(&d, &s)),
                Err(_) => err = f64::INFINITY,
            }
        }
        let d: CMatrix64 =
            data_action(&transform_tt(n, Variant::Deep).expect("T"), n, None).expect("T action");
        match data_action::<f64>(&transform_tt(n, Variant::Shallow).expect("T"), n, None) {
            Ok(s) => err = err.max(diff(&d, &s)),
            Err(_) => err = f64::INFINITY,
        }
    }
    CheckOutcome::within("shallow-deep-equivalence", err, 1e-12)
}

fn adder_counts() -> CheckOutcome {
    let census = gate_census(&laplace_qnpu(6).expect("adder"), false).expect("census");
    CheckOutcome::exact(
        "adder-n6-4cnot-10toffoli",
        census.count("CNOT") == 4 && census.count("Toffoli") == 10,
    )
}

fn total(kind: CensusKind, variant: Variant, n: usize) -> f64 {
    census_row(kind, variant, n).map_or(f64::INFINITY, |r| r.lowered.total() as f64)
}

/// Lowered totals of the shallow adder, source and potential units grow by a
/// constant amount per two added qubits (even `n` from 4 to 12); the reported
/// error is the largest relative spread of those increments.
fn linear_scaling() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for kind in [
        CensusKind::Laplace,
        CensusKind::Source,
        CensusKind::Potential,
    ] {
        let t: Vec<f64> = (4..=12)
            .step_by(2)
            .map(|n| total(kind, Variant::Shallow, n))
            .collect();
        let steps: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        let lo = steps.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = steps.iter().copied().fold(0.0, f64::max);
        worst = worst.max(if lo > 0.0 {
            (hi - lo) / lo
        } else {
            f64::INFINITY
        });
    }
    CheckOutcome::within("linear-adder-source-potential", worst, 0.1)
}

fn boundary_crossover() -> CheckOutcome {
    let ok = [CensusKind::BoundaryDn, CensusKind::BoundaryN]
        .iter()
        .all(|&k| (6..=10).all(|n| total(k, Variant::Deep, n) > total(k, Variant::Shallow, n)));
    CheckOutcome::exact("deep-exceeds-shallow-from-n6", ok)
}

/// Runs every check in a fixed order.
pub fn run_checks() -> Vec<CheckOutcome> {
    vec![
        half_adder(),
        two_qubit_matrices(),
        four_qubit_block_structure(),
        conjugation_identity(),
        hadamard_semantics(),
        variant_equivalence(),
        adder_counts(),
        linear_scaling(),
        boundary_crossover(),
    ]
}
