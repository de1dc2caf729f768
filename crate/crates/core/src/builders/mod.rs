//! Toffoli-level constructions of the four carry-lookahead adders, plus the
//! classical reference recurrence they are checked against.

mod in_place;
mod out_of_place;
mod reference;
pub mod rounds;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{AllocPolicy, AncillaInit, Circuit, CircuitError, Gate, Qubit, WireLabel};

pub use reference::{cla_reference, ReferenceError};
pub use rounds::{round_indices, round_indices_with, RoundBounds, RoundKind, RoundTriple};

/// The four adder designs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DesignId {
    OutFtQcla1,
    OutFtQcla2,
    InFtQcla1,
    InFtQcla2,
}

impl DesignId {
    pub const ALL: [DesignId; 4] = [
        DesignId::OutFtQcla1,
        DesignId::OutFtQcla2,
        DesignId::InFtQcla1,
        DesignId::InFtQcla2,
    ];

    pub fn is_in_place(self) -> bool {
        matches!(self, DesignId::InFtQcla1 | DesignId::InFtQcla2)
    }

    /// Carry-network Toffolis realised as AND/uncompute pairs (T-count
    /// optimised) rather than 7-T Toffolis.
    pub fn uses_and_pairs(self) -> bool {
        matches!(self, DesignId::OutFtQcla1 | DesignId::InFtQcla1)
    }

    /// Short CLI name.
    pub fn short(self) -> &'static str {
        match self {
            DesignId::OutFtQcla1 => "out1",
            DesignId::OutFtQcla2 => "out2",
            DesignId::InFtQcla1 => "in1",
            DesignId::InFtQcla2 => "in2",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DesignId::OutFtQcla1 => "Out-FT-QCLA1",
            DesignId::OutFtQcla2 => "Out-FT-QCLA2",
            DesignId::InFtQcla1 => "In-FT-QCLA1",
            DesignId::InFtQcla2 => "In-FT-QCLA2",
        }
    }

    /// Smallest width at which the closed-form costs are defined.
    pub fn min_formula_width(self) -> u64 {
        if self.is_in_place() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for DesignId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DesignId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DesignId::ALL
            .into_iter()
            .find(|d| {
                d.short().eq_ignore_ascii_case(s)
                    || d.label().eq_ignore_ascii_case(s)
                    || format!("{d:?}").eq_ignore_ascii_case(s)
            })
            .ok_or_else(|| format!("unknown design `{s}` (expected out1, out2, in1 or in2)"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("adder width must be at least 1")]
    ZeroWidth,
    #[error("no wire currently holds {0}")]
    MissingWire(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub bounds: RoundBounds,
}

/// Build one adder at width `n` with default options.
pub fn build(design: DesignId, n: u64) -> Result<Circuit, BuildError> {
    build_with(design, n, BuildOptions::default())
}

pub fn build_with(design: DesignId, n: u64, options: BuildOptions) -> Result<Circuit, BuildError> {
    if n == 0 {
        return Err(BuildError::ZeroWidth);
    }
    if design.is_in_place() {
        in_place::build(design, n as usize, options)
    } else {
        out_of_place::build(design, n as usize)
    }
}

/// Register names that hold the operands and the sum for a design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdderLayout {
    pub a: &'static str,
    pub b: &'static str,
    /// Register whose slot `k` (out-of-place) or `k - 1` (in-place) carries
    /// the generate span ending at `k`.
    pub carries: &'static str,
    pub scratch: &'static str,
}

pub fn layout(design: DesignId) -> AdderLayout {
    if design.is_in_place() {
        AdderLayout {
            a: "A",
            b: "B",
            carries: "Z",
            scratch: "X",
        }
    } else {
        AdderLayout {
            a: "A",
            b: "B",
            carries: "X",
            scratch: "Z",
        }
    }
}

/// How a carry-network Toffoli is realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CarryGate {
    /// Temporary AND onto a fresh ancilla, CNOT onto the target, uncompute.
    AndPair,
    Toffoli,
}

/// Shared state while emitting a carry network: the circuit plus the wire
/// bookkeeping for `p[j,k]` and `g[j,k]`.
struct Network {
    circuit: Circuit,
    a: Vec<Qubit>,
    b: Vec<Qubit>,
    /// `slots[k]` holds the generate span ending at bit `k`; `slots[0]` is
    /// only meaningful out-of-place.
    slots: Vec<Qubit>,
    carry_gate: CarryGate,
    policy: AllocPolicy,
}

impl Network {
    fn push(&mut self, gate: Gate) -> Result<(), BuildError> {
        self.circuit.append(gate)?;
        Ok(())
    }

    fn relabel(&mut self, q: Qubit, label: WireLabel) -> Result<(), BuildError> {
        self.circuit.relabel(q, label)?;
        Ok(())
    }

    /// Wire of `p[j,k]`. Unit spans live on `B[j]`; wider spans on the
    /// ancilla that computed them.
    fn p(&self, j: u64, k: u64) -> Result<Qubit, BuildError> {
        if k == j + 1 {
            return Ok(self.b[j as usize]);
        }
        let label = WireLabel::P(j as usize, k as usize);
        self.circuit
            .labels()
            .find(label)
            .ok_or_else(|| BuildError::MissingWire(label.to_string()))
    }

    fn slot(&self, k: u64) -> Qubit {
        self.slots[k as usize]
    }

    /// Temporary AND of two wires onto a newly allocated ancilla.
    fn and_onto_ancilla(
        &mut self,
        c1: Qubit,
        c2: Qubit,
        label: WireLabel,
    ) -> Result<Qubit, BuildError> {
        let target = self
            .circuit
            .allocate_ancilla(AncillaInit::MagicA, self.policy);
        self.push(Gate::TemporaryAnd { c1, c2, target })?;
        self.relabel(target, label)?;
        Ok(target)
    }

    /// Measurement-based erase of an AND result; the wire becomes spent and
    /// returns to the allocator.
    fn uncompute(&mut self, c1: Qubit, c2: Qubit, target: Qubit) -> Result<(), BuildError> {
        self.push(Gate::Uncompute { c1, c2, target })?;
        self.relabel(target, WireLabel::Spent)?;
        self.circuit.free(target);
        Ok(())
    }

    /// `target ^= c1 & c2` in the design's chosen realisation.
    fn toffoli(&mut self, c1: Qubit, c2: Qubit, target: Qubit) -> Result<(), BuildError> {
        match self.carry_gate {
            CarryGate::Toffoli => self.push(Gate::Toffoli { c1, c2, target }),
            CarryGate::AndPair => {
                let t = self
                    .circuit
                    .allocate_ancilla(AncillaInit::MagicA, self.policy);
                self.push(Gate::TemporaryAnd { c1, c2, target: t })?;
                self.push(Gate::Cnot { control: t, target })?;
                self.push(Gate::Uncompute { c1, c2, target: t })?;
                self.relabel(t, WireLabel::Spent)?;
                self.circuit.free(t);
                Ok(())
            }
        }
    }

    /// P-rounds (or their recomputation): `p[j,k] = p[j,l] & p[l,k]`.
    fn p_rounds(&mut self, triples: &[RoundTriple]) -> Result<(), BuildError> {
        for r in triples {
            let (x, y) = (self.p(r.j, r.l)?, self.p(r.l, r.k)?);
            self.and_onto_ancilla(x, y, WireLabel::P(r.j as usize, r.k as usize))?;
        }
        Ok(())
    }

    /// Erase the spans built by [`Network::p_rounds`].
    fn p_erase(&mut self, triples: &[RoundTriple]) -> Result<(), BuildError> {
        for r in triples {
            let (x, y, t) = (self.p(r.j, r.l)?, self.p(r.l, r.k)?, self.p(r.j, r.k)?);
            self.uncompute(x, y, t)?;
        }
        Ok(())
    }

    /// G-rounds: `g[l,k] ^= g[j,l] & p[l,k]`, renamed `g[j,k]`. Undoing the
    /// round is the same gate with the rename reversed.
    fn g_rounds(&mut self, triples: &[RoundTriple], undo: bool) -> Result<(), BuildError> {
        for r in triples {
            let (g, p, target) = (self.slot(r.l), self.p(r.l, r.k)?, self.slot(r.k));
            self.toffoli(g, p, target)?;
            let start = if undo { r.l } else { r.j };
            self.relabel(target, WireLabel::G(start as usize, r.k as usize))?;
        }
        Ok(())
    }

    /// C-rounds: `g[l,k] ^= g[0,l] & p[l,k]`, renamed `g[0,k]`.
    fn c_rounds(&mut self, triples: &[RoundTriple], undo: bool) -> Result<(), BuildError> {
        for r in triples {
            let (g, p, target) = (self.slot(r.l), self.p(r.l, r.k)?, self.slot(r.k));
            self.toffoli(g, p, target)?;
            let start = if undo { r.l } else { 0 };
            self.relabel(target, WireLabel::G(start as usize, r.k as usize))?;
        }
        Ok(())
    }
}

/// Where a built adder takes its operands and leaves its result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdderIo {
    pub n: usize,
    pub a: Vec<Qubit>,
    pub b: Vec<Qubit>,
    /// Wires labelled `s_0..s_n`, least significant first.
    pub sum: Vec<Qubit>,
    /// Whether `B` must come back unchanged (out-of-place) or holds the low
    /// sum bits (in-place).
    pub restores_b: bool,
}

/// Locate operand registers and the sum wires of a built adder. The sum is
/// found through the final wire labels, not the register layout.
pub fn adder_io(circuit: &Circuit, design: DesignId) -> Result<AdderIo, BuildError> {
    let names = layout(design);
    let reg = |name: &str| {
        circuit
            .register(name)
            .map(|r| r.qubits.clone())
            .ok_or_else(|| BuildError::MissingWire(format!("register {name}")))
    };
    let (a, b) = (reg(names.a)?, reg(names.b)?);
    let n = a.len();
    let sum = (0..=n)
        .map(|i| {
            let label = WireLabel::S(i);
            circuit
                .labels()
                .find(label)
                .ok_or_else(|| BuildError::MissingWire(label.to_string()))
        })
        .collect::<Result<_, _>>()?;
    Ok(AdderIo {
        n,
        a,
        b,
        sum,
        restores_b: !design.is_in_place(),
    })
}
