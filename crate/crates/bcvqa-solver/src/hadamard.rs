//! Hadamard-test assembly and exact evaluation of one objective term.
//!
//! A term circuit is a controlled unit `Q` (ancilla on the top qubit) acting on
//! the data register `0..n`, optional carry or auxiliary qubits above it, plus an
//! optional uncontrolled transform `T` on data and carries. Two layouts realize
//! `⟨σ_z⟩ = Re⟨0|U† T† Q T U|0⟩`:
//!
//! * [`Layout::Reversing`] — `U` and `T` are applied before the Hadamard test;
//!   the test itself reverses them on the bra side;
//! * [`Layout::ExplicitDagger`] — only `U` precedes the test; the controlled
//!   block is `T`, `Q`, `T†`.
//!
//! Source terms use a controlled trial state instead (`controlled_ansatz`), so
//! the test yields `Re⟨0|F† U|0⟩ = Re⟨f̂|u⟩`.
//!
//! [`evaluate_term`] simulates the whole register and traces out the ancilla.
//! [`CompiledTerm`] reduces a term to the operator it induces on the data
//! register (with every auxiliary qubit in `|0⟩`), which gives the same value
//! from the trial state alone and is what the optimizer uses.

use crate::error::SolverError;
use crate::Result;
use bcvqa_sim::{Circuit, GateOp, Statevector64, C64};

/// Placement of the transform relative to the Hadamard test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Trial state and transform before the test.
    Reversing,
    /// Controlled transform, unit and inverse transform inside the test.
    ExplicitDagger,
}

impl Layout {
    /// Lower-case label (`reversing` / `explicit-dagger`).
    pub fn label(self) -> &'static str {
        match self {
            Layout::Reversing => "reversing",
            Layout::ExplicitDagger => "explicit-dagger",
        }
    }
}

/// A term circuit without its trial state.
#[derive(Clone, Debug, PartialEq)]
pub struct TermCircuit {
    /// Uncontrolled transform on data (and carries), if any.
    pub transform: Option<Circuit>,
    /// Controlled unit; its top qubit is the Hadamard-test ancilla.
    pub qnpu: Circuit,
    /// Transform placement.
    pub layout: Layout,
    /// Whether the trial state is applied under the ancilla (source terms).
    pub controlled_ansatz: bool,
}

/// A term circuit together with the trial-state circuit `U(λ_c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TermAssembly {
    /// Trial-state circuit on the data register.
    pub ansatz: Circuit,
    /// The term.
    pub term: TermCircuit,
}

impl TermCircuit {
    /// Plain term without transform.
    pub fn plain(qnpu: Circuit) -> Self {
        Self {
            transform: None,
            qnpu,
            layout: Layout::Reversing,
            controlled_ansatz: false,
        }
    }

    /// Term conjugated by a transform.
    pub fn transformed(transform: Circuit, qnpu: Circuit, layout: Layout) -> Self {
        Self {
            transform: Some(transform),
            qnpu,
            layout,
            controlled_ansatz: false,
        }
    }

    /// Source-type term whose trial state is controlled by the ancilla.
    pub fn with_controlled_ansatz(qnpu: Circuit) -> Self {
        Self {
            transform: None,
            qnpu,
            layout: Layout::Reversing,
            controlled_ansatz: true,
        }
    }

    /// Attaches a trial state.
    pub fn with_ansatz(&self, ansatz: Circuit) -> TermAssembly {
        TermAssembly {
            ansatz,
            term: self.clone(),
        }
    }

    /// Register size including the ancilla.
    pub fn span(&self) -> usize {
        self.qnpu.n_qubits()
    }

    /// Index of the Hadamard-test ancilla.
    pub fn ancilla(&self) -> usize {
        self.span() - 1
    }

    fn validate(&self, n_data: usize) -> Result<()> {
        let span = self.span();
        if span < 2 || n_data >= span {
            return Err(SolverError::InvalidAssembly(format!(
                "a {span}-qubit unit cannot hold {n_data} data qubits and an ancilla"
            )));
        }
        if let Some(t) = &self.transform {
            if t.n_qubits() >= span {
                return Err(SolverError::InvalidAssembly(format!(
                    "transform on {} qubits overlaps the ancilla of a {span}-qubit unit",
                    t.n_qubits()
                )));
            }
        }
        if self.layout == Layout::ExplicitDagger && self.transform.is_none() {
            return Err(SolverError::InvalidAssembly(
                "explicit-dagger layout needs a transform".into(),
            ));
        }
        Ok(())
    }

    fn widen(&self, c: &Circuit) -> Result<Circuit> {
        let map: Vec<usize> = (0..c.n_qubits()).collect();
        Ok(c.remap(&map, self.span())?)
    }

    fn controlled(&self, c: &Circuit) -> Result<Circuit> {
        Ok(self.widen(c)?.controlled_by(self.ancilla())?)
    }

    /// Everything applied after the state-preparation stage and before the
    /// closing Hadamard, on the full register (ancilla included).
    fn test_body(&self, ansatz: Option<&Circuit>) -> Result<(Circuit, Circuit)> {
        let span = self.span();
        let mut pre = Circuit::new(span);
        let mut body = Circuit::new(span);
        if let Some(u) = ansatz {
            if self.controlled_ansatz {
                body.append(&self.controlled(u)?)?;
            } else {
                pre.append(&self.widen(u)?)?;
            }
        }
        match (&self.transform, self.layout) {
            (Some(t), Layout::Reversing) if !self.controlled_ansatz => {
                pre.append(&self.widen(t)?)?;
                body.append(&self.qnpu)?;
            }
            (Some(t), _) => {
                body.append(&self.controlled(t)?)?;
                body.append(&self.qnpu)?;
                body.append(&self.controlled(&t.inverse())?)?;
            }
            (None, _) => body.append(&self.qnpu)?,
        }
        Ok((pre, body))
    }
}

/// `⟨σ_z⟩` of the ancilla after the full Hadamard test, by exact trace-out.
pub fn evaluate_term(assembly: &TermAssembly) -> Result<f64> {
    let term = &assembly.term;
    term.validate(assembly.ansatz.n_qubits())?;
    let (pre, body) = term.test_body(Some(&assembly.ansatz))?;
    let a = term.ancilla();
    let mut state = Statevector64::zero(term.span());
    pre.apply_to(&mut state)?;
    state.apply(&GateOp::h(a))?;
    body.apply_to(&mut state)?;
    state.apply(&GateOp::h(a))?;
    Ok(state.ancilla_expectation(a)?)
}

/// A term reduced to its action on the data register.
#[derive(Clone, Debug, PartialEq)]
pub enum CompiledTerm {
    /// `Re Σ conj(u_i) M_ij u_j` over the nonzero entries `(i, j, M_ij)`.
    Quadratic(Vec<(usize, usize, C64)>),
    /// `Re Σ_j r_j u_j`.
    Linear(Vec<C64>),
}

impl CompiledTerm {
    /// Compiles a term for an `n_data`-qubit trial state.
    ///
    /// Quadratic entries are `⟨i, 0, 1|W|j, 0, 1⟩` with `W` the transform-
    /// conjugated unit, auxiliary qubits in `|0⟩` and the ancilla set; linear
    /// entries are `⟨0, 0, 1|W|j, 0, 1⟩` for controlled-trial-state terms.
    pub fn compile(term: &TermCircuit, n_data: usize) -> Result<Self> {
        term.validate(n_data)?;
        let span = term.span();
        let dim = 1usize << n_data;
        let cbit = 1usize << term.ancilla();
        let (_, body) = term.test_body(None)?;
        let pre_transform = match (&term.transform, term.layout) {
            (Some(t), Layout::Reversing) if !term.controlled_ansatz => Some(term.widen(t)?),
            _ => None,
        };
        let mut linear = vec![C64::new(0.0, 0.0); dim];
        let mut quadratic = Vec::new();
        for j in 0..dim {
            let mut s = Statevector64::basis(span, j | cbit);
            if let Some(t) = &pre_transform {
                t.apply_to(&mut s)?;
            }
            body.apply_to(&mut s)?;
            if let Some(t) = &pre_transform {
                t.inverse().apply_to(&mut s)?;
            }
            let amps = s.amplitudes();
            if term.controlled_ansatz {
                linear[j] = amps[cbit];
            } else {
                for i in 0..dim {
                    let m = amps[i | cbit];
                    if m.norm_sqr() > 1e-28 {
                        quadratic.push((i, j, m));
                    }
                }
            }
        }
        Ok(if term.controlled_ansatz {
            CompiledTerm::Linear(linear)
        } else {
            CompiledTerm::Quadratic(quadratic)
        })
    }

    /// Value of the term for the trial state `u`.
    pub fn evaluate(&self, u: &[C64]) -> f64 {
        match self {
            CompiledTerm::Quadratic(entries) => entries
                .iter()
                .map(|&(i, j, m)| (u[i].conj() * m * u[j]).re)
                .sum(),
            CompiledTerm::Linear(r) => r.iter().zip(u).map(|(a, b)| (a * b).re).sum(),
        }
    }
}
