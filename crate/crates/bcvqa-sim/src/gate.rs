//! Gate kinds, gate applications and their matrices.
//!
//! Matrices follow the little-endian convention: for multi-qubit kinds the
//! controls occupy the low-order qubits of the written-out matrix and the target the
//! highest one, so `CNOT` is `[[1,0,0,0],[0,0,0,1],[0,0,1,0],[0,1,0,0]]` with
//! control qubit 0 and target qubit 1.

use crate::error::SimError;
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::Result;
use num_complex::Complex;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

/// Complex double used for stored gate parameters.
pub type C64 = Complex<f64>;

/// A 2×2 complex matrix stored row-major as `[[m00, m01], [m10, m11]]`.
pub type Mat2 = [[C64; 2]; 2];

/// The kinds of gates understood by the emulator.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    /// Identity.
    I,
    /// Pauli X.
    X,
    /// Pauli Y.
    Y,
    /// Pauli Z.
    Z,
    /// Hadamard.
    H,
    /// `Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    Ry(f64),
    /// `Rz(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
    Rz(f64),
    /// Phase gate `diag(1, e^{iθ})` (T = Phase(π/4), S = Phase(π/2)).
    Phase(f64),
    /// Global phase `e^{iθ}` acting on the whole register (no qubits).
    GlobalPhase(f64),
    /// Arbitrary single-qubit unitary.
    Unitary(Mat2),
    /// Controlled NOT (one control).
    CNOT,
    /// Controlled Z (one control).
    CZ,
    /// Doubly controlled NOT.
    Toffoli,
    /// NOT with an arbitrary number of controls.
    MultiControlledX,
    /// Z with an arbitrary number of controls.
    MultiControlledZ,
    /// Arbitrary single-qubit kind with one or more controls.
    ControlledGeneric(Box<GateKind>),
}

impl GateKind {
    /// Short name used in censuses and error messages.
    pub fn name(&self) -> String {
        match self {
            GateKind::I => "I".into(),
            GateKind::X => "X".into(),
            GateKind::Y => "Y".into(),
            GateKind::Z => "Z".into(),
            GateKind::H => "H".into(),
            GateKind::Ry(_) => "Ry".into(),
            GateKind::Rz(_) => "Rz".into(),
            GateKind::Phase(_) => "P".into(),
            GateKind::GlobalPhase(_) => "GlobalPhase".into(),
            GateKind::Unitary(_) => "U".into(),
            GateKind::CNOT => "CNOT".into(),
            GateKind::CZ => "CZ".into(),
            GateKind::Toffoli => "Toffoli".into(),
            GateKind::MultiControlledX => "MCX".into(),
            GateKind::MultiControlledZ => "MCZ".into(),
            GateKind::ControlledGeneric(inner) => format!("C{}", inner.name()),
        }
    }

    /// Whether this is an uncontrolled single-qubit kind.
    pub fn is_single_qubit(&self) -> bool {
        matches!(
            self,
            GateKind::I
                | GateKind::X
                | GateKind::Y
                | GateKind::Z
                | GateKind::H
                | GateKind::Ry(_)
                | GateKind::Rz(_)
                | GateKind::Phase(_)
                | GateKind::Unitary(_)
        )
    }

    /// The single-qubit kind applied to the target when all controls are set.
    pub fn base(&self) -> GateKind {
        match self {
            GateKind::CNOT | GateKind::Toffoli | GateKind::MultiControlledX => GateKind::X,
            GateKind::CZ | GateKind::MultiControlledZ => GateKind::Z,
            GateKind::ControlledGeneric(inner) => (**inner).clone(),
            other => other.clone(),
        }
    }

    /// The 2×2 matrix of a single-qubit kind, `None` otherwise.
    pub fn single_matrix(&self) -> Option<Mat2> {
        let c = |re: f64, im: f64| C64::new(re, im);
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        Some(match self {
            GateKind::I => [[o, z], [z, o]],
            GateKind::X => [[z, o], [o, z]],
            GateKind::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
            GateKind::Z => [[o, z], [z, c(-1.0, 0.0)]],
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::Ry(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            GateKind::Rz(t) => [
                [C64::from_polar(1.0, -t / 2.0), z],
                [z, C64::from_polar(1.0, t / 2.0)],
            ],
            GateKind::Phase(t) => [[o, z], [z, C64::from_polar(1.0, *t)]],
            GateKind::Unitary(m) => *m,
            _ => return None,
        })
    }

    /// The inverse kind (same qubits).
    pub fn inverse(&self) -> GateKind {
        match self {
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::GlobalPhase(t) => GateKind::GlobalPhase(-t),
            GateKind::Unitary(m) => GateKind::Unitary(mat2_dagger(m)),
            GateKind::Y => GateKind::Y,
            GateKind::ControlledGeneric(inner) => {
                GateKind::ControlledGeneric(Box::new(inner.inverse()))
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Conjugate transpose of a 2×2 matrix.
pub fn mat2_dagger(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

/// Product `a · b` of 2×2 matrices.
pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut r = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

/// Principal square root `V` of a 2×2 unitary `U` (so that `V·V = U`).
///
/// Uses the closed form `V = (U + s·I)/t` with `s = ±√det U` and
/// `t = √(tr U + 2s)`, choosing the sign of `s` that keeps `t` away from zero.
pub fn mat2_sqrt(u: &Mat2) -> Mat2 {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let tr = u[0][0] + u[1][1];
    let s0 = det.sqrt();
    let (s, t) = [s0, -s0]
        .into_iter()
        .map(|s| (s, (tr + s * 2.0).sqrt()))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("two candidates");
    [
        [(u[0][0] + s) / t, u[0][1] / t],
        [u[1][0] / t, (u[1][1] + s) / t],
    ]
}

/// One gate application: a kind acting on target qubits under control qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    /// The gate kind.
    pub kind: GateKind,
    /// Target qubit indices (one for every kind except [`GateKind::GlobalPhase`]).
    pub targets: Vec<usize>,
    /// Control qubit indices.
    pub controls: Vec<usize>,
}

impl GateOp {
    /// Uncontrolled single-qubit gate.
    pub fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            targets: vec![target],
            controls: vec![],
        }
    }

    /// Pauli X on `t`.
    pub fn x(t: usize) -> Self {
        Self::single(GateKind::X, t)
    }

    /// Pauli Z on `t`.
    pub fn z(t: usize) -> Self {
        Self::single(GateKind::Z, t)
    }

    /// Hadamard on `t`.
    pub fn h(t: usize) -> Self {
        Self::single(GateKind::H, t)
    }

    /// `Ry(θ)` on `t`.
    pub fn ry(t: usize, theta: f64) -> Self {
        Self::single(GateKind::Ry(theta), t)
    }

    /// `Rz(θ)` on `t`.
    pub fn rz(t: usize, theta: f64) -> Self {
        Self::single(GateKind::Rz(theta), t)
    }

    /// Phase gate on `t`.
    pub fn phase(t: usize, theta: f64) -> Self {
        Self::single(GateKind::Phase(theta), t)
    }

    /// Global phase `e^{iθ}`.
    pub fn global_phase(theta: f64) -> Self {
        Self {
            kind: GateKind::GlobalPhase(theta),
            targets: vec![],
            controls: vec![],
        }
    }

    /// CNOT with control `c` and target `t`.
    pub fn cnot(c: usize, t: usize) -> Self {
        Self {
            kind: GateKind::CNOT,
            targets: vec![t],
            controls: vec![c],
        }
    }

    /// CZ on `c`, `t`.
    pub fn cz(c: usize, t: usize) -> Self {
        Self {
            kind: GateKind::CZ,
            targets: vec![t],
            controls: vec![c],
        }
    }

    /// Toffoli with controls `c1`, `c2` and target `t`.
    pub fn toffoli(c1: usize, c2: usize, t: usize) -> Self {
        Self {
            kind: GateKind::Toffoli,
            targets: vec![t],
            controls: vec![c1, c2],
        }
    }

    /// Canonical controlled form of a single-qubit `base` kind.
    ///
    /// X becomes X/CNOT/Toffoli/MCX and Z becomes Z/CZ/MCZ by control count; the
    /// identity stays an uncontrolled identity; every other kind becomes
    /// [`GateKind::ControlledGeneric`] when controlled.
    ///
    /// # Panics
    /// Panics if `base` is not a single-qubit kind.
    pub fn controlled(base: GateKind, controls: Vec<usize>, target: usize) -> Self {
        assert!(
            base.is_single_qubit(),
            "controlled() requires a single-qubit base kind"
        );
        let kind = match (&base, controls.len()) {
            (_, 0) => base,
            (GateKind::I, _) => return Self::single(GateKind::I, target),
            (GateKind::X, 1) => GateKind::CNOT,
            (GateKind::X, 2) => GateKind::Toffoli,
            (GateKind::X, _) => GateKind::MultiControlledX,
            (GateKind::Z, 1) => GateKind::CZ,
            (GateKind::Z, _) => GateKind::MultiControlledZ,
            _ => GateKind::ControlledGeneric(Box::new(base)),
        };
        Self {
            kind,
            targets: vec![target],
            controls,
        }
    }

    /// Multi-controlled X (canonicalized by control count).
    pub fn mcx(controls: Vec<usize>, t: usize) -> Self {
        Self::controlled(GateKind::X, controls, t)
    }

    /// Multi-controlled Z (canonicalized by control count).
    pub fn mcz(controls: Vec<usize>, t: usize) -> Self {
        Self::controlled(GateKind::Z, controls, t)
    }

    /// All qubits touched by this gate (controls first, then targets).
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        self.controls.len() + self.targets.len()
    }

    /// The same gate with the inverse kind.
    pub fn inverse(&self) -> Self {
        Self {
            kind: self.kind.inverse(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// Checks arity, index range and disjointness against an `n_qubits` register.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let arity_err = |expected: &str| SimError::Arity {
            kind: self.kind.name(),
            expected: expected.to_string(),
            got: format!(
                "{} target(s), {} control(s)",
                self.targets.len(),
                self.controls.len()
            ),
        };
        let (nt, nc) = (self.targets.len(), self.controls.len());
        match &self.kind {
            GateKind::GlobalPhase(_) => {
                if nt != 0 || nc != 0 {
                    return Err(arity_err("no qubits"));
                }
            }
            k if k.is_single_qubit() => {
                if nt != 1 || nc != 0 {
                    return Err(arity_err("1 target, 0 controls"));
                }
            }
            GateKind::CNOT | GateKind::CZ => {
                if nt != 1 || nc != 1 {
                    return Err(arity_err("1 target, 1 control"));
                }
            }
            GateKind::Toffoli => {
                if nt != 1 || nc != 2 {
                    return Err(arity_err("1 target, 2 controls"));
                }
            }
            GateKind::MultiControlledX | GateKind::MultiControlledZ => {
                if nt != 1 || nc == 0 {
                    return Err(arity_err("1 target, at least 1 control"));
                }
            }
            GateKind::ControlledGeneric(inner) => {
                if !inner.is_single_qubit() {
                    return Err(SimError::UnsupportedKind(self.kind.name()));
                }
                if nt != 1 || nc == 0 {
                    return Err(arity_err("1 target, at least 1 control"));
                }
            }
            _ => unreachable!("all kinds covered"),
        }
        let mut seen = 0u128;
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(SimError::QubitOutOfRange { index: q, n_qubits });
            }
            if q >= 128 {
                return Err(SimError::InvalidSize(format!(
                    "qubit index {q} exceeds 127"
                )));
            }
            if seen & (1u128 << q) != 0 {
                return Err(SimError::OverlappingQubits(q));
            }
            seen |= 1u128 << q;
        }
        Ok(())
    }
}

/// The matrix of a fixed-arity gate kind, in the little-endian convention.
///
/// Single-qubit kinds give 2×2 matrices; `CNOT`, `CZ` and single-control
/// `ControlledGeneric` give 4×4 matrices with the control on qubit 0; `Toffoli`
/// gives the 8×8 matrix with controls on qubits 0, 1; `GlobalPhase` gives the
/// 1×1 matrix `[e^{iθ}]`. Multi-controlled kinds have no fixed arity and are
/// rejected.
pub fn gate_matrix<T: Real>(kind: &GateKind) -> Result<CMatrix<T>> {
    let conv = |c: C64| Complex::new(T::of(c.re), T::of(c.im));
    if let GateKind::GlobalPhase(t) = kind {
        let mut m = CMatrix::zeros(1);
        m.set(0, 0, conv(C64::from_polar(1.0, *t)));
        return Ok(m);
    }
    if let Some(u) = kind.single_matrix() {
        let mut m = CMatrix::zeros(2);
        for r in 0..2 {
            for c in 0..2 {
                m.set(r, c, conv(u[r][c]));
            }
        }
        return Ok(m);
    }
    let n_controls = match kind {
        GateKind::CNOT | GateKind::CZ | GateKind::ControlledGeneric(_) => 1,
        GateKind::Toffoli => 2,
        _ => return Err(SimError::UnsupportedKind(kind.name())),
    };
    let u = kind
        .base()
        .single_matrix()
        .ok_or_else(|| SimError::UnsupportedKind(kind.name()))?;
    let dim = 1usize << (n_controls + 1);
    let cmask = (1usize << n_controls) - 1;
    let tbit = 1usize << n_controls;
    let mut m = CMatrix::identity(dim);
    for col in 0..dim {
        if col & cmask != cmask {
            continue;
        }
        let bt = usize::from(col & tbit != 0);
        for out in 0..2 {
            let row = (col & !tbit) | (out * tbit);
            m.set(row, col, conv(u[out][bt]));
        }
    }
    Ok(m)
}
