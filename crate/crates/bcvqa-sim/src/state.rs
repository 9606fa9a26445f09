//! Dense little-endian statevector and exact ancilla read-out.

use crate::error::SimError;
use crate::gate::{GateKind, GateOp};
use crate::scalar::Real;
use crate::Result;
use num_complex::Complex;

/// Complex amplitude vector over `2^n_qubits` basis states.
///
/// Basis index `b` encodes qubit `q` in bit `q` (qubit 0 least significant).
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> Statevector<T> {
    /// The all-zero basis state `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// The computational basis state `|index⟩`.
    ///
    /// # Panics
    /// Panics if `index ≥ 2^n_qubits`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let len = 1usize << n_qubits;
        assert!(index < len, "basis index out of range");
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); len];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps an amplitude vector whose length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(len));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Wraps real amplitudes (imaginary parts zero).
    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of amplitudes (`2^n_qubits`).
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    /// Always false: a register holds at least one amplitude.
    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Amplitude slice.
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Mutable amplitude slice.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    /// Consumes the state, returning its amplitudes.
    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// Real parts of the amplitudes.
    pub fn real_parts(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.re).collect()
    }

    /// `Σ |a_b|²`.
    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Rescales to unit norm.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if n == T::zero() || !n.is_finite() {
            return Err(SimError::ZeroNorm);
        }
        let inv = T::one() / n;
        for a in &mut self.amplitudes {
            *a = *a * inv;
        }
        Ok(())
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.n_qubits != other.n_qubits {
            return Err(SimError::QubitCountMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    /// Embeds this state as the low-order qubits of a larger register whose
    /// remaining qubits are `|0⟩`.
    pub fn embed(&self, total_qubits: usize) -> Result<Self> {
        if total_qubits < self.n_qubits {
            return Err(SimError::QubitCountMismatch {
                expected: self.n_qubits,
                got: total_qubits,
            });
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1usize << total_qubits];
        amplitudes[..self.len()].copy_from_slice(&self.amplitudes);
        Ok(Self {
            n_qubits: total_qubits,
            amplitudes,
        })
    }

    /// Applies one gate in place.
    ///
    /// Works on amplitude pairs selected by bit masks; no matrix is formed.
    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        if let GateKind::GlobalPhase(theta) = op.kind {
            let ph = Complex::from_polar(T::one(), T::of(theta));
            for a in &mut self.amplitudes {
                *a = *a * ph;
            }
            return Ok(());
        }
        let base = op.kind.base();
        let m = base
            .single_matrix()
            .ok_or_else(|| SimError::UnsupportedKind(op.kind.name()))?;
        let target = op.targets[0];
        let cmask = op.controls.iter().fold(0usize, |acc, &c| acc | (1 << c));
        self.apply_controlled_2x2(target, cmask, &m);
        Ok(())
    }

    fn apply_controlled_2x2(&mut self, target: usize, cmask: usize, m: &[[Complex<f64>; 2]; 2]) {
        let conv = |c: Complex<f64>| Complex::new(T::of(c.re), T::of(c.im));
        let (m00, m01, m10, m11) = (conv(m[0][0]), conv(m[0][1]), conv(m[1][0]), conv(m[1][1]));
        let zero = Complex::new(T::zero(), T::zero());
        let tbit = 1usize << target;
        let diagonal = m01 == zero && m10 == zero;
        let amps = &mut self.amplitudes;
        for i0 in 0..amps.len() {
            if i0 & tbit != 0 || i0 & cmask != cmask {
                continue;
            }
            let i1 = i0 | tbit;
            let (a0, a1) = (amps[i0], amps[i1]);
            if diagonal {
                amps[i0] = m00 * a0;
                amps[i1] = m11 * a1;
            } else {
                amps[i0] = m00 * a0 + m01 * a1;
                amps[i1] = m10 * a0 + m11 * a1;
            }
        }
    }

    /// `⟨σ_z⟩` of qubit `ancilla` from the reduced density matrix: the weight of
    /// basis states with the ancilla at 0 minus the weight with it at 1.
    pub fn ancilla_expectation(&self, ancilla: usize) -> Result<T> {
        if ancilla >= self.n_qubits {
            return Err(SimError::QubitOutOfRange {
                index: ancilla,
                n_qubits: self.n_qubits,
            });
        }
        let bit = 1usize << ancilla;
        let (mut p0, mut p1) = (T::zero(), T::zero());
        for (b, a) in self.amplitudes.iter().enumerate() {
            if b & bit == 0 {
                p0 = p0 + a.norm_sqr();
            } else {
                p1 = p1 + a.norm_sqr();
            }
        }
        Ok(p0 - p1)
    }

    /// Total probability weight on basis states where any qubit of `mask` is 1.
    pub fn weight_outside(&self, mask: usize) -> T {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(b, _)| b & mask != 0)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }
}
