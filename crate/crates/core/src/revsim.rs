//! Classical simulation of Toffoli-level circuits on computational basis
//! states.
//!
//! Magic-state ancillae start at 0 here: every such qubit is first written
//! by a `TemporaryAnd`, which overwrites it. `Uncompute` checks that its
//! target holds the AND of the controls and then marks it spent; spent
//! qubits may only be touched again through `Reset`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::builders::{adder_io, build, cla_reference, AdderIo, BuildError, DesignId};
use crate::circuit::{Circuit, Gate, GateKind, Qubit};

/// Default largest width for [`exhaustive_check`].
pub const EXHAUSTIVE_BOUND: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: Vec<bool>,
    spent: Vec<bool>,
}

impl BasisState {
    /// All qubits 0, none spent.
    pub fn zeros(num_qubits: usize) -> Self {
        BasisState {
            bits: vec![false; num_qubits],
            spent: vec![false; num_qubits],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, q: Qubit) -> bool {
        self.bits[q.index()]
    }

    pub fn set(&mut self, q: Qubit, value: bool) {
        self.bits[q.index()] = value;
    }

    pub fn is_spent(&self, q: Qubit) -> bool {
        self.spent[q.index()]
    }

    /// Write `value` little-endian onto `wires`.
    pub fn write(&mut self, wires: &[Qubit], value: u128) {
        for (i, &q) in wires.iter().enumerate() {
            self.set(q, i < 128 && (value >> i) & 1 == 1);
        }
    }

    /// Read `wires` little-endian. At most 128 wires.
    pub fn read(&self, wires: &[Qubit]) -> u128 {
        wires
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &q)| acc | (self.bit(q) as u128) << i)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum RevSimError {
    #[error("gate {0}: uncompute target does not hold the AND of its controls")]
    UncomputeAssertion(usize),
    #[error("gate {0}: operand was already spent")]
    SpentQubitUse(usize),
    #[error("gate {index}: {kind} has no classical semantics")]
    NonClassicalGate { index: usize, kind: &'static str },
    #[error("input state has {got} qubits, circuit has {expected}")]
    WrongSize { expected: usize, got: usize },
}

/// Run `circuit` on a basis state.
pub fn run_basis(circuit: &Circuit, input: BasisState) -> Result<BasisState, RevSimError> {
    if input.len() != circuit.num_qubits() {
        return Err(RevSimError::WrongSize {
            expected: circuit.num_qubits(),
            got: input.len(),
        });
    }
    let mut s = input;
    for (index, gate) in circuit.gates().iter().enumerate() {
        if let Gate::Reset(q) = *gate {
            s.bits[q.index()] = false;
            s.spent[q.index()] = false;
            continue;
        }
        if gate.qubits().as_slice().iter().any(|&q| s.is_spent(q)) {
            return Err(RevSimError::SpentQubitUse(index));
        }
        match *gate {
            Gate::Not(q) => s.bits[q.index()] ^= true,
            Gate::Cnot { control, target } => s.bits[target.index()] ^= s.bit(control),
            Gate::Toffoli { c1, c2, target } => s.bits[target.index()] ^= s.bit(c1) & s.bit(c2),
            Gate::TemporaryAnd { c1, c2, target } => s.set(target, s.bit(c1) & s.bit(c2)),
            Gate::Uncompute { c1, c2, target } => {
                if s.bit(target) != (s.bit(c1) & s.bit(c2)) {
                    return Err(RevSimError::UncomputeAssertion(index));
                }
                s.spent[target.index()] = true;
            }
            _ => {
                return Err(RevSimError::NonClassicalGate {
                    index,
                    kind: gate.kind().name(),
                })
            }
        }
    }
    Ok(s)
}

/// Why one `(a, b)` pair failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FailureKind {
    Sim(RevSimError),
    WrongSum {
        expected: u128,
        got: u128,
    },
    NotRestored {
        register: &'static str,
        got: u128,
    },
    /// An ancilla that is neither a sum wire nor spent ended nonzero.
    Garbage {
        qubit: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    pub a: u64,
    pub b: u64,
    pub kind: FailureKind,
}

/// Outcome of running an adder over a set of input pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdderCheck {
    pub design: DesignId,
    pub n: u32,
    pub total: u64,
    pub passed: u64,
    /// Sorted by `(a, b)`.
    pub failures: Vec<PairFailure>,
}

impl AdderCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("width {n} exceeds the exhaustive bound {bound}")]
    TooWide { n: u32, bound: u32 },
    #[error("width {0} outside 1..=64")]
    Width(u32),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Initial state for an adder: operands on `A` and `B`, everything else 0.
pub fn adder_input(circuit: &Circuit, io: &AdderIo, a: u64, b: u64) -> BasisState {
    let mut s = BasisState::zeros(circuit.num_qubits());
    s.write(&io.a, a as u128);
    s.write(&io.b, b as u128);
    s
}

fn check_one(circuit: &Circuit, io: &AdderIo, n: u32, a: u64, b: u64) -> Option<FailureKind> {
    let out = match run_basis(circuit, adder_input(circuit, io, a, b)) {
        Ok(s) => s,
        Err(e) => return Some(FailureKind::Sim(e)),
    };
    let expected = cla_reference(a, b, n).expect("operands fit the width");
    let got = out.read(&io.sum);
    if got != expected {
        return Some(FailureKind::WrongSum { expected, got });
    }
    let got_a = out.read(&io.a);
    if got_a != a as u128 {
        return Some(FailureKind::NotRestored {
            register: "A",
            got: got_a,
        });
    }
    if io.restores_b {
        let got_b = out.read(&io.b);
        if got_b != b as u128 {
            return Some(FailureKind::NotRestored {
                register: "B",
                got: got_b,
            });
        }
    }
    (0..circuit.num_qubits() as u32)
        .map(Qubit)
        .find(|&q| circuit.is_ancilla(q) && !io.sum.contains(&q) && !out.is_spent(q) && out.bit(q))
        .map(|q| FailureKind::Garbage {
            qubit: circuit.qubit_ref(q).to_string(),
        })
}

/// Run a built adder on the given pairs in parallel.
pub fn check_pairs(
    circuit: &Circuit,
    design: DesignId,
    pairs: &[(u64, u64)],
) -> Result<AdderCheck, CheckError> {
    let io = adder_io(circuit, design)?;
    let n = io.n as u32;
    let mut failures: Vec<PairFailure> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            check_one(circuit, &io, n, a, b).map(|kind| PairFailure { a, b, kind })
        })
        .collect();
    failures.sort_by_key(|f| (f.a, f.b));
    Ok(AdderCheck {
        design,
        n,
        total: pairs.len() as u64,
        passed: (pairs.len() - failures.len()) as u64,
        failures,
    })
}

/// All `2^(2n)` operand pairs at width `n ≤ EXHAUSTIVE_BOUND`.
pub fn exhaustive_check(design: DesignId, n: u32) -> Result<AdderCheck, CheckError> {
    exhaustive_check_bounded(design, n, EXHAUSTIVE_BOUND)
}

pub fn exhaustive_check_bounded(
    design: DesignId,
    n: u32,
    bound: u32,
) -> Result<AdderCheck, CheckError> {
    if n > bound {
        return Err(CheckError::TooWide { n, bound });
    }
    if n == 0 || n > 32 {
        return Err(CheckError::Width(n));
    }
    let circuit = build(design, n as u64)?;
    let side = 1u64 << n;
    let pairs: Vec<(u64, u64)> = (0..side)
        .flat_map(|a| (0..side).map(move |b| (a, b)))
        .collect();
    check_pairs(&circuit, design, &pairs)
}

/// Gate kinds [`run_basis`] understands.
pub fn is_classical(kind: GateKind) -> bool {
    matches!(
        kind,
        GateKind::Not
            | GateKind::Cnot
            | GateKind::Toffoli
            | GateKind::TemporaryAnd
            | GateKind::Uncompute
            | GateKind::Reset
    )
}
