//! Bricklayer ansatz structure and the real orthogonality of its blocks.

mod common;

use bcvqa_sim::ansatz::{build_ansatz, parameter_count, so4_block, AnsatzConfig};
use bcvqa_sim::{CMatrix64, Statevector64};
use common::rng;
use proptest::prelude::*;
use rand::Rng;

/// Independent block count: ⌊n/2⌋ pairs in even layers, ⌊(n−1)/2⌋ in odd layers.
fn count_oracle(n: usize, d: usize) -> usize {
    (0..d)
        .map(|l| if l % 2 == 0 { n / 2 } else { (n - 1) / 2 } * if l == 0 { 3 } else { 6 })
        .sum()
}

#[test]
fn parameter_counts_follow_the_brick_pattern() {
    for n in 2..=8 {
        for d in 1..=5 {
            let cfg = AnsatzConfig::new(n, d).unwrap();
            assert_eq!(parameter_count(&cfg), count_oracle(n, d), "n={n} d={d}");
        }
    }
    assert_eq!(parameter_count(&AnsatzConfig::new(2, 1).unwrap()), 3);
    assert_eq!(parameter_count(&AnsatzConfig::new(6, 2).unwrap()), 9 + 12);
    assert!(AnsatzConfig::new(1, 1).is_err());
    assert!(AnsatzConfig::new(3, 0).is_err());
}

#[test]
fn wrong_parameter_count_is_rejected() {
    let cfg = AnsatzConfig::new(4, 2).unwrap();
    assert!(build_ansatz(&cfg, &[0.0; 5]).is_err());
    assert!(so4_block(&[0.0; 4]).is_err());
}

proptest! {
    #[test]
    fn so4_blocks_are_real_orthogonal(p in proptest::collection::vec(-7.0f64..7.0, 6), first in any::<bool>()) {
        let params = if first { &p[..3] } else { &p[..] };
        let m: CMatrix64 = so4_block(params).unwrap().to_matrix(2).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                prop_assert!(m.get(r, c).im.abs() < 1e-12);
                let dot: f64 = (0..4).map(|k| m.get(k, r).re * m.get(k, c).re).sum();
                let delta = if r == c { 1.0 } else { 0.0 };
                prop_assert!((dot - delta).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn trial_states_are_real_unit_vectors() {
    let mut g = rng(17);
    for n in 2..=6 {
        for d in 1..=3 {
            let cfg = AnsatzConfig::new(n, d).unwrap();
            let p: Vec<f64> = (0..parameter_count(&cfg))
                .map(|_| g.gen_range(0.0..12.5))
                .collect();
            let s: Statevector64 = build_ansatz(&cfg, &p).unwrap().run().unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            assert!(
                s.amplitudes().iter().all(|a| a.im.abs() < 1e-12),
                "n={n} d={d}"
            );
        }
    }
}

#[test]
fn two_qubit_single_block_spans_every_sign_pattern() {
    // Sweeping the three angles must reach states with every sign pattern of
    // the four amplitudes, as required for arbitrary real targets.
    let mut seen = std::collections::HashSet::new();
    let cfg = AnsatzConfig::new(2, 1).unwrap();
    let mut g = rng(23);
    for _ in 0..4000 {
        let p: Vec<f64> = (0..3).map(|_| g.gen_range(0.0..12.6)).collect();
        let s: Statevector64 = build_ansatz(&cfg, &p).unwrap().run().unwrap();
        let key: Vec<bool> = s.amplitudes().iter().map(|a| a.re > 0.0).collect();
        seen.insert(key);
    }
    assert_eq!(seen.len(), 16);
}
