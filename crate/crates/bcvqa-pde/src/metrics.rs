//! Error measures between a reference and an approximate discrete solution.
//!
//! * `ε_l2 = √(Σ_k (a_k − b_k)²)` — unnormalized Euclidean distance;
//! * `ε_tr = √(1 − Σ_k (â_k·b̂_k)²)` with `â = a/‖a‖`, `b̂ = b/‖b‖` — a
//!   pointwise-overlap deviation (zero when both vectors are the same basis
//!   vector, one for disjoint supports). It is not the quantum trace distance:
//!   equal vectors with spread-out entries give a nonzero value.
//! * `ε_ov = √(1 − (Σ_k â_k·b̂_k)²)` — the pure-state trace distance between
//!   the amplitude-encoded vectors; zero exactly when they are parallel.
//! * time averages are plain arithmetic means over the time levels.

use crate::error::PdeError;
use crate::Result;
use bcvqa_sim::Real;

fn check_len<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(PdeError::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// Euclidean distance between `reference` and `approx`.
pub fn l2_error<T: Real>(reference: &[T], approx: &[T]) -> Result<T> {
    check_len(reference, approx)?;
    Ok(reference
        .iter()
        .zip(approx)
        .fold(T::zero(), |s, (&a, &b)| s + (a - b) * (a - b))
        .sqrt())
}

/// Pointwise-overlap deviation `√(1 − Σ_k (â_k·b̂_k)²)` of the normalized vectors.
pub fn trace_distance<T: Real>(reference: &[T], approx: &[T]) -> Result<T> {
    check_len(reference, approx)?;
    let norm = |v: &[T]| v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let (na, nb) = (norm(reference), norm(approx));
    if !(na > T::zero()) || !(nb > T::zero()) {
        return Err(PdeError::ZeroNorm);
    }
    let overlap = reference.iter().zip(approx).fold(T::zero(), |s, (&a, &b)| {
        let p = (a / na) * (b / nb);
        s + p * p
    });
    Ok((T::one() - overlap).max(T::zero()).sqrt())
}

/// Pure-state trace distance `√(1 − ⟨â|b̂⟩²)` of the normalized vectors.
pub fn overlap_distance<T: Real>(reference: &[T], approx: &[T]) -> Result<T> {
    check_len(reference, approx)?;
    let norm = |v: &[T]| v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let (na, nb) = (norm(reference), norm(approx));
    if !(na > T::zero()) || !(nb > T::zero()) {
        return Err(PdeError::ZeroNorm);
    }
    let overlap = reference
        .iter()
        .zip(approx)
        .fold(T::zero(), |s, (&a, &b)| s + (a / na) * (b / nb));
    Ok((T::one() - overlap * overlap).max(T::zero()).sqrt())
}

/// Arithmetic mean of a non-empty series.
pub fn time_average<T: Real>(series: &[T]) -> Result<T> {
    if series.is_empty() {
        return Err(PdeError::Empty);
    }
    let sum = series.iter().fold(T::zero(), |s, &x| s + x);
    Ok(sum / T::of(series.len() as f64))
}
