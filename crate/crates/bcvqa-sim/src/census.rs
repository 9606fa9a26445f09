//! Gate counting for term circuits.
//!
//! A census counts ops by kind name. With `decompose` set, every op is first
//! rewritten exactly into gates on at most two qubits (see
//! [`crate::decompose::lower_to_two_qubit`]), so deep (multi-controlled) and
//! shallow (carry-qubit) variants can be compared on equal footing. Global
//! phases act on no qubit and are never counted.

use crate::ansatz::{build_ansatz, parameter_count, AnsatzConfig};
use crate::circuit::Circuit;
use crate::decompose::lower_circuit;
use crate::error::SimError;
use crate::gate::{GateKind, GateOp};
use crate::qnpu::{
    boundary_dn_ops, boundary_n_ops, increment_ops, potential_ops, source_ops, QnpuLayout, Variant,
    Wires,
};
use crate::Result;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Gate counts of one circuit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCensus {
    /// Count per kind name (`CNOT`, `Toffoli`, `Ry`, …).
    pub by_kind: BTreeMap<String, usize>,
    /// Ops acting on one qubit.
    pub one_qubit: usize,
    /// Ops acting on two qubits.
    pub two_qubit: usize,
    /// Ops acting on three or more qubits (zero after decomposition).
    pub multi_qubit: usize,
    /// Register size of the counted circuit.
    pub n_qubits: usize,
}

impl GateCensus {
    /// Total number of counted ops.
    pub fn total(&self) -> usize {
        self.one_qubit + self.two_qubit + self.multi_qubit
    }

    /// Count of one kind name (0 if absent).
    pub fn count(&self, kind: &str) -> usize {
        self.by_kind.get(kind).copied().unwrap_or(0)
    }

    fn add(&mut self, op: &GateOp) {
        if matches!(op.kind, GateKind::GlobalPhase(_)) {
            return;
        }
        *self.by_kind.entry(op.kind.name()).or_default() += 1;
        match op.arity() {
            1 => self.one_qubit += 1,
            2 => self.two_qubit += 1,
            _ => self.multi_qubit += 1,
        }
    }
}

/// Counts the ops of `circuit`, optionally after lowering to two-qubit gates.
pub fn gate_census(circuit: &Circuit, decompose: bool) -> Result<GateCensus> {
    let lowered;
    let c = if decompose {
        lowered = lower_circuit(circuit)?;
        &lowered
    } else {
        circuit
    };
    let mut census = GateCensus {
        n_qubits: c.n_qubits(),
        ..GateCensus::default()
    };
    for op in c.ops() {
        census.add(op);
    }
    Ok(census)
}

/// Term circuits available for resource counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CensusKind {
    /// Controlled cyclic-shift adder of the Laplacian term.
    Laplace,
    /// Controlled trial state plus controlled inverse source preparation.
    Source,
    /// Controlled potential preparation plus the copy gates.
    Potential,
    /// The j_DN boundary unit including its permutation transform.
    BoundaryDn,
    /// The j_N boundary unit including its permutation transform.
    BoundaryN,
    /// The permutation transform `T_t` alone (uncontrolled).
    Transform,
    /// The bricklayer trial state alone.
    Ansatz,
}

impl CensusKind {
    /// Every kind, in a stable order.
    pub const ALL: [CensusKind; 7] = [
        CensusKind::Laplace,
        CensusKind::Source,
        CensusKind::Potential,
        CensusKind::BoundaryDn,
        CensusKind::BoundaryN,
        CensusKind::Transform,
        CensusKind::Ansatz,
    ];

    /// Name used on the command line and in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            CensusKind::Laplace => "laplace",
            CensusKind::Source => "source",
            CensusKind::Potential => "potential",
            CensusKind::BoundaryDn => "boundary-dn",
            CensusKind::BoundaryN => "boundary-n",
            CensusKind::Transform => "transform",
            CensusKind::Ansatz => "ansatz",
        }
    }
}

impl fmt::Display for CensusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CensusKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        CensusKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| SimError::InvalidSize(format!("unknown census kind `{s}`")))
    }
}

fn reference_ansatz(n: usize) -> Result<Circuit> {
    let cfg = AnsatzConfig::new(n, 1)?;
    let params: Vec<f64> = (0..parameter_count(&cfg))
        .map(|i| 0.1 + 0.37 * i as f64)
        .collect();
    build_ansatz(&cfg, &params)
}

/// Builds the counted circuit of a term for `n` data qubits.
///
/// Trial-state and preparation circuits use a depth-1 ansatz with fixed generic
/// angles. The deep boundary units apply the uncontrolled deep transform before
/// the controlled boundary gate; the shallow units conjugate the controlled
/// boundary gate with the controlled carry-qubit transform and its inverse.
pub fn census_circuit(kind: CensusKind, variant: Variant, n: usize) -> Result<Circuit> {
    let layout = QnpuLayout::new(variant, n);
    let controlled = Wires::canonical(&layout, true);
    let span = controlled.span();
    match kind {
        CensusKind::Laplace => Circuit::from_ops(span, increment_ops(&controlled, variant)?),
        CensusKind::Transform => {
            let w = Wires::canonical(&layout, false);
            Circuit::from_ops(w.span(), increment_ops(&w, variant)?)
        }
        CensusKind::BoundaryDn | CensusKind::BoundaryN => {
            let boundary = match kind {
                CensusKind::BoundaryDn => boundary_dn_ops(&controlled, variant)?,
                _ => boundary_n_ops(&controlled, variant)?,
            };
            let mut c = Circuit::new(span);
            match variant {
                Variant::Deep => {
                    let w = Wires::canonical(&layout, false);
                    c.extend(increment_ops(&w, variant)?)?;
                    c.extend(boundary)?;
                }
                Variant::Shallow => {
                    c.extend(increment_ops(&controlled, variant)?)?;
                    c.extend(boundary)?;
                    c.extend(crate::qnpu::decrement_ops(&controlled, variant)?)?;
                }
            }
            Ok(c)
        }
        CensusKind::Ansatz => reference_ansatz(n),
        CensusKind::Source => {
            let w = Wires {
                data: (0..n).collect(),
                carries: vec![],
                control: Some(n),
            };
            let map: Vec<usize> = (0..n).collect();
            let u = reference_ansatz(n)?.remap(&map, n + 1)?.controlled_by(n)?;
            let mut c = Circuit::new(n + 1);
            c.append(&u)?;
            c.extend(source_ops(&w, &reference_ansatz(n)?)?)?;
            Ok(c)
        }
        CensusKind::Potential => {
            let w = Wires {
                data: (0..n).collect(),
                carries: vec![],
                control: Some(2 * n),
            };
            let register: Vec<usize> = (n..2 * n).collect();
            Circuit::from_ops(
                2 * n + 1,
                potential_ops(&w, &register, &reference_ansatz(n)?)?,
            )
        }
    }
}

/// One census row: counts before and after lowering to two-qubit gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    /// Counted term.
    pub kind: CensusKind,
    /// Deep or shallow realization.
    pub variant: Variant,
    /// Data-register size.
    pub n: usize,
    /// Counts of the circuit as built.
    pub native: GateCensus,
    /// Counts after lowering to gates on at most two qubits.
    pub lowered: GateCensus,
}

/// Census of one term, variant and size.
pub fn census_row(kind: CensusKind, variant: Variant, n: usize) -> Result<CensusRow> {
    let c = census_circuit(kind, variant, n)?;
    Ok(CensusRow {
        kind,
        variant,
        n,
        native: gate_census(&c, false)?,
        lowered: gate_census(&c, true)?,
    })
}
