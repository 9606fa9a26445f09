//! Hadamard-test assemblies against closed-form expectations.

mod common;

use bcvqa_sim::qnpu::{
    boundary_dn_qnpu, boundary_n_qnpu, laplace_qnpu_variant, potential_qnpu, source_qnpu,
    transform_tt, Variant,
};
use bcvqa_sim::{build_ansatz, parameter_count, AnsatzConfig, Circuit, GateOp, C64};
use bcvqa_solver::{
    evaluate_term, exact_state_circuit, CompiledTerm, Layout, SolverError, TermCircuit,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ansatz(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> (Circuit, Vec<f64>) {
    let cfg = AnsatzConfig::new(n, depth).unwrap();
    let params = common::random_params(rng, parameter_count(&cfg));
    let circuit = build_ansatz(&cfg, &params).unwrap();
    let u = circuit.run::<f64>().unwrap().real_parts();
    (circuit, u)
}

/// `Re⟨u|S|u⟩` with `S|k⟩ = |k+1 mod N⟩`.
fn shift_expectation(u: &[f64]) -> f64 {
    let np = u.len();
    (0..np).map(|k| u[(k + 1) % np] * u[k]).sum()
}

fn variants() -> [Variant; 2] {
    [Variant::Deep, Variant::Shallow]
}

fn dn_term(n: usize, v: Variant, layout: Layout) -> TermCircuit {
    TermCircuit::transformed(
        transform_tt(n, v).unwrap(),
        boundary_dn_qnpu(n, v).unwrap(),
        layout,
    )
}

fn n_term(n: usize, v: Variant, layout: Layout) -> TermCircuit {
    TermCircuit::transformed(
        transform_tt(n, v).unwrap(),
        boundary_n_qnpu(n, v).unwrap(),
        layout,
    )
}

#[test]
fn laplace_term_on_special_states() {
    for n in 2..=4 {
        for v in variants() {
            let term = TermCircuit::plain(laplace_qnpu_variant(n, v).unwrap());
            // |0…0⟩ moves to |1⟩: no overlap.
            assert!(
                evaluate_term(&term.with_ansatz(Circuit::new(n)))
                    .unwrap()
                    .abs()
                    < 1e-12
            );
            // The uniform state is shift invariant.
            let mut h = Circuit::new(n);
            h.extend((0..n).map(GateOp::h)).unwrap();
            assert!((evaluate_term(&term.with_ansatz(h)).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn laplace_term_matches_shift_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=4 {
        for v in variants() {
            let term = TermCircuit::plain(laplace_qnpu_variant(n, v).unwrap());
            for _ in 0..5 {
                let (ansatz, u) = random_ansatz(&mut rng, n, 2);
                let got = evaluate_term(&term.with_ansatz(ansatz)).unwrap();
                assert!((got - shift_expectation(&u)).abs() < 1e-10, "n={n} {v:?}");
            }
        }
    }
}

#[test]
fn boundary_terms_match_corner_forms_in_both_layouts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 2..=4 {
        for v in variants() {
            for layout in [Layout::Reversing, Layout::ExplicitDagger] {
                let dn = dn_term(n, v, layout);
                let nn = n_term(n, v, layout);
                for _ in 0..5 {
                    let (ansatz, u) = random_ansatz(&mut rng, n, 2);
                    let last = u.len() - 1;
                    let j_dn = evaluate_term(&dn.with_ansatz(ansatz.clone())).unwrap();
                    let j_n = evaluate_term(&nn.with_ansatz(ansatz)).unwrap();
                    assert!(
                        (j_dn - 2.0 * u[0] * u[last]).abs() < 1e-10,
                        "j_DN n={n} {v:?} {layout:?}"
                    );
                    assert!(
                        (j_n - (u[0] * u[0] + u[last] * u[last])).abs() < 1e-10,
                        "j_N n={n} {v:?} {layout:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn potential_term_weights_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=3 {
        let np = 1 << n;
        let w: Vec<f64> = (0..np).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let term =
            TermCircuit::plain(potential_qnpu(n, &exact_state_circuit(&w).unwrap()).unwrap());
        let (ansatz, u) = random_ansatz(&mut rng, n, 2);
        let want: f64 = u.iter().zip(&w).map(|(a, b)| a * a * b / norm).sum();
        assert!((evaluate_term(&term.with_ansatz(ansatz)).unwrap() - want).abs() < 1e-10);
    }
}

#[test]
fn source_term_is_the_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 2..=3 {
        let np = 1 << n;
        let f: Vec<f64> = (0..np).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        let term = TermCircuit::with_controlled_ansatz(
            source_qnpu(n, &exact_state_circuit(&f).unwrap()).unwrap(),
        );
        let (ansatz, u) = random_ansatz(&mut rng, n, 2);
        let want: f64 = u.iter().zip(&f).map(|(a, b)| a * b / norm).sum();
        assert!((evaluate_term(&term.with_ansatz(ansatz)).unwrap() - want).abs() < 1e-10);
    }
}

#[test]
fn compiled_terms_equal_full_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 2..=4 {
        let np = 1 << n;
        for v in variants() {
            let f: Vec<f64> = (0..np).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let terms = [
                TermCircuit::plain(laplace_qnpu_variant(n, v).unwrap()),
                dn_term(n, v, Layout::Reversing),
                dn_term(n, v, Layout::ExplicitDagger),
                n_term(n, v, Layout::Reversing),
                TermCircuit::plain(potential_qnpu(n, &exact_state_circuit(&f).unwrap()).unwrap()),
                TermCircuit::with_controlled_ansatz(
                    source_qnpu(n, &exact_state_circuit(&f).unwrap()).unwrap(),
                ),
            ];
            for term in &terms {
                let compiled = CompiledTerm::compile(term, n).unwrap();
                let (ansatz, _) = random_ansatz(&mut rng, n, 3);
                let amps: Vec<C64> = ansatz.run::<f64>().unwrap().into_amplitudes();
                let full = evaluate_term(&term.with_ansatz(ansatz)).unwrap();
                assert!(
                    (compiled.evaluate(&amps) - full).abs() < 1e-12,
                    "n={n} {v:?}"
                );
            }
        }
    }
}

#[test]
fn explicit_dagger_needs_a_transform() {
    let term = TermCircuit {
        layout: Layout::ExplicitDagger,
        ..TermCircuit::plain(laplace_qnpu_variant(2, Variant::Deep).unwrap())
    };
    assert!(matches!(
        evaluate_term(&term.with_ansatz(Circuit::new(2))),
        Err(SolverError::InvalidAssembly(_))
    ));
    assert!(matches!(
        CompiledTerm::compile(&term, 2),
        Err(SolverError::InvalidAssembly(_))
    ));
}

#[test]
fn oversized_trial_state_is_rejected() {
    let term = TermCircuit::plain(laplace_qnpu_variant(2, Variant::Deep).unwrap());
    assert!(matches!(
        evaluate_term(&term.with_ansatz(Circuit::new(3))),
        Err(SolverError::InvalidAssembly(_))
    ));
}

#[test]
fn layout_labels() {
    assert_eq!(Layout::Reversing.label(), "reversing");
    assert_eq!(Layout::ExplicitDagger.label(), "explicit-dagger");
}
