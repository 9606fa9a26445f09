//! Ordered gate lists over a fixed register, with matrix conversion.

use crate::error::SimError;
use crate::gate::{GateKind, GateOp};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::state::Statevector;
use crate::Result;

/// Default qubit cap for dense matrix construction.
pub const DEFAULT_MATRIX_CAP: usize = 10;

/// An ordered list of gate applications on an `n_qubits` register.
///
/// Every op is validated against the register when pushed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    /// Empty circuit on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
        }
    }

    /// Circuit from a list of ops, validating each one.
    pub fn from_ops(n_qubits: usize, ops: impl IntoIterator<Item = GateOp>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        c.extend(ops)?;
        Ok(c)
    }

    /// Register size.
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// The ops in application order.
    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    /// Number of ops.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    /// Whether the circuit has no ops.
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Appends one op after validating it.
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Appends several ops.
    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<()> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    /// Appends another circuit acting on the same or a smaller register
    /// (its qubits map to the low-order qubits of `self`).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(SimError::QubitCountMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        self.extend(other.ops.iter().cloned())
    }

    /// Relabels qubit `q` as `map[q]` inside a register of `new_n` qubits.
    pub fn remap(&self, map: &[usize], new_n: usize) -> Result<Circuit> {
        if map.len() < self.n_qubits {
            return Err(SimError::QubitCountMismatch {
                expected: self.n_qubits,
                got: map.len(),
            });
        }
        Circuit::from_ops(
            new_n,
            self.ops.iter().map(|op| GateOp {
                kind: op.kind.clone(),
                targets: op.targets.iter().map(|&q| map[q]).collect(),
                controls: op.controls.iter().map(|&q| map[q]).collect(),
            }),
        )
    }

    /// The inverse circuit: reversed order, each op inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// The controlled version of the whole circuit with `control` added to every op.
    ///
    /// A global phase `e^{iθ}` becomes the phase gate `diag(1, e^{iθ})` on the
    /// control qubit. `control` must not be used by any op of the circuit.
    pub fn controlled_by(&self, control: usize) -> Result<Circuit> {
        if control >= self.n_qubits {
            return Err(SimError::QubitOutOfRange {
                index: control,
                n_qubits: self.n_qubits,
            });
        }
        let mut out = Circuit::new(self.n_qubits);
        for op in &self.ops {
            out.push(control_op(op, control)?)?;
        }
        Ok(out)
    }

    /// Applies the circuit to a state in place.
    pub fn apply_to<T: Real>(&self, state: &mut Statevector<T>) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(SimError::QubitCountMismatch {
                expected: self.n_qubits,
                got: state.n_qubits(),
            });
        }
        for op in &self.ops {
            state.apply(op)?;
        }
        Ok(())
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run<T: Real>(&self) -> Result<Statevector<T>> {
        let mut s = Statevector::zero(self.n_qubits);
        self.apply_to(&mut s)?;
        Ok(s)
    }

    /// Full unitary, built column by column from basis-state images.
    pub fn to_matrix<T: Real>(&self, cap: usize) -> Result<CMatrix<T>> {
        if self.n_qubits > cap {
            return Err(SimError::MatrixCapExceeded {
                n_qubits: self.n_qubits,
                cap,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim);
        for col in 0..dim {
            let mut s = Statevector::basis(self.n_qubits, col);
            self.apply_to(&mut s)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                m.set(row, col, *a);
            }
        }
        Ok(m)
    }
}

/// Adds `control` to the controls of `op`, canonicalizing the kind.
pub fn control_op(op: &GateOp, control: usize) -> Result<GateOp> {
    if op.qubits().any(|q| q == control) {
        return Err(SimError::OverlappingQubits(control));
    }
    if let GateKind::GlobalPhase(theta) = op.kind {
        return Ok(GateOp::phase(control, theta));
    }
    let mut controls = op.controls.clone();
    controls.push(control);
    Ok(GateOp::controlled(op.kind.base(), controls, op.targets[0]))
}

/// Dense unitary of a circuit with the default qubit cap.
pub fn circuit_to_matrix<T: Real>(circuit: &Circuit) -> Result<CMatrix<T>> {
    circuit.to_matrix(DEFAULT_MATRIX_CAP)
}
