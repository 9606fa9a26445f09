//! End-to-end steady solves and time marching against the finite-difference
//! reference.

mod common;

use bcvqa_pde::{BoundarySpec64, ProblemSpec64, TimeSpec};
use bcvqa_solver::{
    control_size, solve_steady, time_march, FitCache, GdConfig, ProgressEvent, SolverConfig,
    SolverError,
};
use std::sync::Mutex;

#[test]
fn steady_dirichlet_matches_the_reference() {
    let (_, p) = &common::seven_settings()[1];
    let r = solve_steady(p, SolverConfig::for_qubits(2), None, None).unwrap();
    assert!(r.l2 <= 1e-5, "l2 {}", r.l2);
    // (0.08, 0.12, 0.12, 0.08) is the reference solution.
    assert!((r.y_fd[1] - 0.12).abs() < 1e-12);
    assert!(r.objective < 0.0);
    assert_eq!(r.control.params.len() + 1, control_size(2, 1).unwrap());
}

#[test]
fn steady_periodic_solution_is_anchored() {
    let (_, p) = &common::seven_settings()[0];
    let r = solve_steady(p, SolverConfig::for_qubits(2), None, None).unwrap();
    assert!(r.l2 <= 1e-5, "l2 {}", r.l2);
    assert!((r.y_vqa[1] + r.y_vqa[2]).abs() < 1e-12);
}

#[test]
fn short_heat_run_tracks_the_reference() {
    let p = ProblemSpec64::transient(
        2,
        1.0,
        vec![0.0; 4],
        BoundarySpec64::dirichlet(0.0, 0.0),
        TimeSpec { dt: 0.02, steps: 5 },
        vec![1.0; 4],
    );
    let r = time_march(&p, SolverConfig::for_qubits(2), None, None).unwrap();
    assert_eq!(r.steps.len(), 5);
    assert!(r.mean_l2() <= 1e-4, "mean l2 {}", r.mean_l2());
    assert!((r.steps[4].time - 0.1).abs() < 1e-15);
    assert!(r.steps[1..].iter().all(|s| s.pso_iterations <= 50));
    // Heat decays: the reference maximum drops every step.
    assert!(r.steps.windows(2).all(|w| w[1].y_fd[1] < w[0].y_fd[1]));
}

#[test]
fn runs_are_reproducible_from_the_seed() {
    let (_, p) = &common::seven_settings()[6];
    let a = solve_steady(p, SolverConfig::for_qubits(2), None, None).unwrap();
    let b = solve_steady(p, SolverConfig::for_qubits(2), None, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cache_hits_do_not_change_the_run() {
    let (_, p) = &common::seven_settings()[2];
    let mut cache = FitCache::default();
    let cold = solve_steady(p, SolverConfig::for_qubits(2), Some(&mut cache), None).unwrap();
    assert_eq!(cache.len(), 1);
    let warm = solve_steady(p, SolverConfig::for_qubits(2), Some(&mut cache), None).unwrap();
    assert_eq!(cold, warm);
}

#[test]
fn progress_lines_are_key_value_pairs() {
    let lines = Mutex::new(Vec::new());
    let observer = |e: &ProgressEvent| lines.lock().unwrap().push(e.to_string());
    let (_, p) = &common::seven_settings()[1];
    let mut cfg = SolverConfig::for_qubits(2);
    cfg.gd.log_every = 1;
    cfg.pso.log_every = 1;
    solve_steady(p, cfg, None, Some(&observer)).unwrap();
    let lines = lines.into_inner().unwrap();
    assert!(lines.iter().any(|l| l.starts_with("stage=pso ")));
    assert!(lines.iter().any(|l| l.starts_with("stage=gd ")));
    for l in &lines {
        assert!(
            l.split(' ').all(|kv| kv
                .split_once('=')
                .is_some_and(|(k, v)| !k.is_empty() && !v.is_empty())),
            "{l}"
        );
    }
}

#[test]
fn invalid_settings_are_rejected_before_solving() {
    let (_, p) = &common::seven_settings()[1];
    let cfg = SolverConfig {
        depth: 0,
        ..SolverConfig::for_qubits(2)
    };
    assert!(matches!(
        solve_steady(p, cfg, None, None),
        Err(SolverError::InvalidConfig(_))
    ));
    let cfg = SolverConfig {
        gd: GdConfig {
            tolerance_exponent: 9,
            ..GdConfig::default()
        },
        ..SolverConfig::default()
    };
    assert!(matches!(
        solve_steady(p, cfg, None, None),
        Err(SolverError::InvalidConfig(_))
    ));
    let mut bad = ProblemSpec64::transient(
        2,
        1.0,
        vec![0.0; 4],
        BoundarySpec64::dirichlet(0.0, 0.0),
        TimeSpec { dt: 0.0, steps: 3 },
        vec![0.0; 4],
    );
    assert!(time_march(&bad, SolverConfig::default(), None, None).is_err());
    bad.time = Some(TimeSpec { dt: 0.1, steps: 3 });
    bad.initial = Some(vec![0.0; 3]);
    assert!(time_march(&bad, SolverConfig::default(), None, None).is_err());
}
