//! Error measures.

use bcvqa_pde::{l2_error, overlap_distance, time_average, trace_distance, PdeError};
use proptest::prelude::*;

#[test]
fn l2_error_hand_values() {
    assert_eq!(l2_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
    assert!((l2_error(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(
        l2_error(&[1.0], &[1.0, 2.0]),
        Err(PdeError::LengthMismatch {
            expected: 1,
            got: 2
        })
    );
}

#[test]
fn trace_distance_hand_values() {
    assert_eq!(
        trace_distance(&[1.0, 0.0, 0.0], &[3.0, 0.0, 0.0]).unwrap(),
        0.0
    );
    assert_eq!(trace_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    // Two equal vectors with two equal entries: 1 − 2·(1/2)² = 1/2.
    assert!((trace_distance(&[1.0, 1.0], &[1.0, 1.0]).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(
        trace_distance(&[0.0, 0.0], &[1.0, 0.0]),
        Err(PdeError::ZeroNorm)
    );
    assert_eq!(
        trace_distance(&[1.0, 0.0], &[0.0, 0.0]),
        Err(PdeError::ZeroNorm)
    );
    assert!(trace_distance(&[1.0], &[1.0, 0.0]).is_err());
}

#[test]
fn overlap_distance_hand_values() {
    // The square root magnifies rounding in 1 − overlap² to about √ε.
    assert!(overlap_distance(&[1.0, 1.0], &[2.0, 2.0]).unwrap() < 1e-7);
    assert_eq!(overlap_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    // Sign flips are invisible to a pure-state distance.
    assert!(overlap_distance(&[1.0, -2.0], &[-1.0, 2.0]).unwrap() < 1e-7);
    // 45° between the vectors: √(1 − 1/2).
    assert!((overlap_distance(&[1.0, 0.0], &[1.0, 1.0]).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(
        overlap_distance(&[0.0, 0.0], &[1.0, 0.0]),
        Err(PdeError::ZeroNorm)
    );
}

#[test]
fn time_average_hand_values() {
    assert_eq!(time_average(&[0.0, 2.0]).unwrap(), 1.0);
    assert_eq!(time_average(&[0.25; 7]).unwrap(), 0.25);
    assert_eq!(time_average::<f64>(&[]), Err(PdeError::Empty));
}

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0f64..10.0, 5)
}

proptest! {
    #[test]
    fn l2_error_is_a_metric(a in vec3(), b in vec3(), c in vec3()) {
        let ab = l2_error(&a, &b).unwrap();
        prop_assert_eq!(ab, l2_error(&b, &a).unwrap());
        prop_assert_eq!(l2_error(&a, &a).unwrap(), 0.0);
        prop_assert!(ab <= l2_error(&a, &c).unwrap() + l2_error(&c, &b).unwrap() + 1e-12);
        if a != b {
            prop_assert!(ab > 0.0);
        }
    }

    #[test]
    fn trace_distance_is_scale_invariant(a in vec3(), b in vec3(), s in 0.01f64..100.0, t in 0.01f64..100.0) {
        prop_assume!(a.iter().any(|v| v.abs() > 1e-3) && b.iter().any(|v| v.abs() > 1e-3));
        let base = trace_distance(&a, &b).unwrap();
        let sa: Vec<f64> = a.iter().map(|v| v * s).collect();
        let tb: Vec<f64> = b.iter().map(|v| v * t).collect();
        prop_assert!((trace_distance(&sa, &tb).unwrap() - base).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn time_average_of_constant_series(c in -5.0f64..5.0, len in 1usize..50) {
        prop_assert!((time_average(&vec![c; len]).unwrap() - c).abs() < 1e-12);
    }
}
