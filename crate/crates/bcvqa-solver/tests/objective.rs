//! The variational energy against an independently assembled dense form, and
//! its gradients against finite differences.

mod common;

use bcvqa_pde::{BoundarySpec64, ProblemSpec64};
use bcvqa_sim::qnpu::Variant;
use bcvqa_sim::{parameter_count, AnsatzConfig};
use bcvqa_solver::{
    boundary_corrections, effective_problem, Control, NeumannMode, Objective, PrepMethod, Reporter,
    SolverError, SourceConvention, Stage, TermOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact_options() -> TermOptions {
    TermOptions {
        prep: PrepMethod::Exact,
        ..TermOptions::default()
    }
}

fn build(
    p: &ProblemSpec64,
    prev: Option<(&[f64], f64)>,
    depth: usize,
    options: &TermOptions,
) -> Objective {
    let eff = effective_problem(p, prev, SourceConvention::GhostElimination, 1.0).unwrap();
    Objective::build(eff, depth, options, None, Reporter::silent(Stage::FitPso)).unwrap()
}

fn random_control(rng: &mut ChaCha8Rng, obj: &Objective) -> Control {
    Control {
        lambda0: rng.gen_range(0.05..1.0),
        params: common::random_params(rng, obj.parameter_count()),
    }
}

fn unit_state(obj: &Objective, params: &[f64]) -> Vec<f64> {
    obj.state(params).unwrap().iter().map(|a| a.re).collect()
}

#[test]
fn energy_matches_dense_form_for_all_settings() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, p) in common::seven_settings() {
        let obj = build(&p, None, 1, &exact_options());
        for _ in 0..20 {
            let c = random_control(&mut rng, &obj);
            let want = common::dense_energy(&p, None, c.lambda0, &unit_state(&obj, &c.params));
            let got = obj.value(&c).unwrap();
            assert!((got - want).abs() < 1e-9, "{name}: got {got}, want {want}");
        }
    }
}

#[test]
fn energy_matches_dense_form_for_shallow_circuits_and_time_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let options = TermOptions {
        variant: Variant::Shallow,
        ..exact_options()
    };
    for (name, p) in common::seven_settings() {
        let prev: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let obj = build(&p, Some((&prev, 0.02)), 2, &options);
        for _ in 0..5 {
            let c = random_control(&mut rng, &obj);
            let want = common::dense_energy(
                &p,
                Some((&prev, 0.02)),
                c.lambda0,
                &unit_state(&obj, &c.params),
            );
            assert!((obj.value(&c).unwrap() - want).abs() < 1e-9, "{name}");
        }
    }
}

#[test]
fn ghost_weights_through_the_potential_unit_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (name, p) in common::seven_settings() {
        let dedicated = build(&p, None, 1, &exact_options());
        let options = TermOptions {
            neumann_mode: NeumannMode::ViaPotential,
            ..exact_options()
        };
        let routed = build(&p, None, 1, &options);
        for _ in 0..5 {
            let c = random_control(&mut rng, &dedicated);
            assert!(
                (dedicated.value(&c).unwrap() - routed.value(&c).unwrap()).abs() < 1e-10,
                "{name}"
            );
        }
    }
}

#[test]
fn energy_with_variable_reaction_matches_dense_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut p = ProblemSpec64::steady(3, 0.5, vec![1.0; 8], BoundarySpec64::dirichlet(0.3, -0.2));
    p.zeta = 2.0;
    p.potential = (0..8).map(|k| -1.0 - 0.25 * k as f64).collect();
    let obj = build(&p, None, 2, &exact_options());
    assert!(obj.terms.potential.is_some());
    for _ in 0..10 {
        let c = random_control(&mut rng, &obj);
        let want = common::dense_energy(&p, None, c.lambda0, &unit_state(&obj, &c.params));
        assert!((obj.value(&c).unwrap() - want).abs() < 1e-9);
    }
}

#[test]
fn compiled_and_full_term_values_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for (name, p) in common::seven_settings() {
        let obj = build(&p, None, 2, &exact_options());
        let params = common::random_params(&mut rng, obj.parameter_count());
        let fast = obj.term_values(&params).unwrap();
        let full = obj.term_values_exact(&params).unwrap();
        for (a, b) in [
            (fast.laplace, full.laplace),
            (fast.dn, full.dn),
            (fast.neumann, full.neumann),
            (fast.ghost, full.ghost),
            (fast.potential, full.potential),
            (fast.source, full.source),
        ] {
            assert!((a - b).abs() < 1e-12, "{name}");
        }
    }
}

#[test]
fn zero_scale_gives_zero_energy_and_no_lambda_gradient() {
    let (_, p) = &common::seven_settings()[1];
    let obj = build(p, None, 1, &exact_options());
    let c = Control {
        lambda0: 0.0,
        params: vec![0.3; obj.parameter_count()],
    };
    assert_eq!(obj.value(&c).unwrap(), 0.0);
    assert!(matches!(obj.gradient(&c), Err(SolverError::ZeroScale)));
}

#[test]
fn periodic_energy_without_source_is_non_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let p = ProblemSpec64::steady(2, 1.0, vec![0.0; 4], BoundarySpec64::periodic());
    let obj = build(&p, None, 2, &exact_options());
    assert!(obj.terms.source.is_none() && obj.terms.dn.is_none());
    // The cyclic stencil annihilates constants and is positive otherwise.
    assert!(common::dense_energy(&p, None, 1.0, &[0.5; 4]).abs() < 1e-12);
    for _ in 0..20 {
        let c = random_control(&mut rng, &obj);
        assert!(obj.value(&c).unwrap() >= -1e-12);
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for n in 2..=3 {
        let p = ProblemSpec64::steady(
            n,
            1.0,
            vec![1.0; 1 << n],
            BoundarySpec64::dirichlet(0.2, 0.0),
        );
        let obj = build(&p, None, 2, &exact_options());
        for _ in 0..20 {
            let c = random_control(&mut rng, &obj);
            let g = obj.gradient(&c).unwrap();
            let x = c.to_vec();
            let h = 1e-6;
            for i in 0..x.len() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[i] += h;
                xm[i] -= h;
                let fd = (obj.value_flat(&xp) - obj.value_flat(&xm)) / (2.0 * h);
                let scale = fd.abs().max(g[i].abs()).max(1e-3);
                let tol = if i == 0 { 1e-6 } else { 1e-4 };
                assert!(
                    (g[i] - fd).abs() / scale < tol,
                    "n={n} i={i}: {} vs {fd}",
                    g[i]
                );
            }
        }
    }
}

#[test]
fn solution_is_scaled_real_state() {
    let (_, p) = &common::seven_settings()[1];
    let obj = build(p, None, 1, &exact_options());
    let c = Control {
        lambda0: 2.0,
        params: vec![0.4, 1.1, -0.3],
    };
    let u = unit_state(&obj, &c.params);
    let y = obj.solution(&c).unwrap();
    for (a, b) in y.iter().zip(&u) {
        assert!((a - 2.0 * b).abs() < 1e-15);
    }
    assert_eq!(Control::from_slice(&c.to_vec()), c);
}

#[test]
fn half_lambda_convention_shifts_the_first_source_entry() {
    // Dirichlet D = 1 on the left, ν = 1, N_p = 4: Δx = 0.2, ν/Δx² = 25, so
    // f̃₁ = f₁ + 0.5·D·ν·λ₀/Δx² = 1 + 12.5·λ₀.
    let p = ProblemSpec64::steady(2, 1.0, vec![1.0; 4], BoundarySpec64::dirichlet(1.0, 0.0));
    for lambda0 in [0.0, 0.4, 1.0] {
        let eff = boundary_corrections(&p, lambda0, SourceConvention::HalfLambda).unwrap();
        assert!((eff.source[0] - (1.0 + 12.5 * lambda0)).abs() < 1e-12);
        assert_eq!(&eff.source[1..], &[1.0, 1.0, 1.0]);
    }
    let eff = boundary_corrections(&p, 0.4, SourceConvention::GhostElimination).unwrap();
    assert!((eff.source[0] - 26.0).abs() < 1e-12);
}

#[test]
fn corner_removal_turns_the_periodic_stencil_into_dirichlet() {
    let per = ProblemSpec64::steady(3, 1.0, vec![1.0; 8], BoundarySpec64::periodic());
    let dir = ProblemSpec64::steady(3, 1.0, vec![1.0; 8], BoundarySpec64::dirichlet(0.0, 0.0));
    let a_per = common::dense_system(&per, None).0;
    let a_dir = effective_problem(&dir, None, SourceConvention::GhostElimination, 1.0)
        .unwrap()
        .dense_matrix();
    let s = dir.stiffness();
    for i in 0..8 {
        for j in 0..8 {
            let corner = if (i, j) == (0, 7) || (i, j) == (7, 0) {
                s
            } else {
                0.0
            };
            assert!((a_per[i][j] + corner - a_dir[i][j]).abs() < 1e-9);
        }
    }
}

#[test]
fn single_qubit_problems_are_rejected() {
    let p = ProblemSpec64::steady(1, 1.0, vec![1.0; 2], BoundarySpec64::dirichlet(0.0, 0.0));
    assert!(matches!(
        effective_problem(&p, None, SourceConvention::GhostElimination, 1.0),
        Err(SolverError::InvalidConfig(_))
    ));
}

#[test]
fn non_positive_time_step_is_rejected() {
    let (_, p) = &common::seven_settings()[1];
    assert!(effective_problem(
        p,
        Some((&[0.0; 4], 0.0)),
        SourceConvention::GhostElimination,
        1.0
    )
    .is_err());
    assert!(effective_problem(
        p,
        Some((&[0.0; 3], 0.1)),
        SourceConvention::GhostElimination,
        1.0
    )
    .is_err());
}

#[test]
fn parameter_counts_follow_the_trial_state() {
    let (_, p) = &common::seven_settings()[1];
    for (depth, count) in [(1, 3), (5, 15), (7, 21)] {
        let obj = build(p, None, depth, &exact_options());
        assert_eq!(obj.parameter_count(), count);
        assert_eq!(
            parameter_count(&AnsatzConfig::new(2, depth).unwrap()),
            count
        );
    }
}
