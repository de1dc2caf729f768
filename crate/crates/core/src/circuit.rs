//! Circuit intermediate representation.
//!
//! A [`Circuit`] owns a register table, an append-only gate list and a
//! [`WireNameMap`] that tracks the semantic value each qubit currently
//! holds. Qubits are addressed internally by a flat [`Qubit`] id assigned in
//! allocation order; [`QubitRef`] is the `(register, index)` view of the same
//! qubit.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Flat qubit id, unique within one circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Qubit(pub u32);

impl Qubit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Classical bit id. Bits are allocated one per measurement, in program order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cbit(pub u32);

impl Cbit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// `(register, index)` view of a qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitRef {
    pub register: String,
    pub index: usize,
}

impl QubitRef {
    pub fn new(register: impl Into<String>, index: usize) -> Self {
        QubitRef {
            register: register.into(),
            index,
        }
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

/// Initial state of an ancilla qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AncillaInit {
    /// `|0⟩`
    Zero,
    /// `(|0⟩ + e^{iπ/4}|1⟩)/√2`, the resource state consumed by a temporary AND.
    MagicA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    ToffoliLevel,
    CliffordTLevel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AllocPolicy {
    /// Always extend the scratch register.
    #[default]
    Fresh,
    /// Hand back a freed ancilla of the same init kind when one exists.
    Reuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Not(Qubit),
    Cnot {
        control: Qubit,
        target: Qubit,
    },
    Toffoli {
        c1: Qubit,
        c2: Qubit,
        target: Qubit,
    },
    TemporaryAnd {
        c1: Qubit,
        c2: Qubit,
        target: Qubit,
    },
    Uncompute {
        c1: Qubit,
        c2: Qubit,
        target: Qubit,
    },
    H(Qubit),
    T(Qubit),
    Tdg(Qubit),
    S(Qubit),
    Sdg(Qubit),
    Z(Qubit),
    Cz(Qubit, Qubit),
    /// `H` followed by a computational-basis measurement into `cbit`.
    MeasureX {
        qubit: Qubit,
        cbit: Cbit,
    },
    ClassicallyControlledCz {
        cbit: Cbit,
        a: Qubit,
        b: Qubit,
    },
    /// Return an ancilla to its declared initial state.
    Reset(Qubit),
}

/// Discriminant of [`Gate`], used for histograms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
    TemporaryAnd,
    Uncompute,
    H,
    T,
    Tdg,
    S,
    Sdg,
    Z,
    Cz,
    MeasureX,
    ClassicallyControlledCz,
    Reset,
}

impl GateKind {
    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub const ALL: [GateKind; 15] = [
        GateKind::Not,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::TemporaryAnd,
        GateKind::Uncompute,
        GateKind::H,
        GateKind::T,
        GateKind::Tdg,
        GateKind::S,
        GateKind::Sdg,
        GateKind::Z,
        GateKind::Cz,
        GateKind::MeasureX,
        GateKind::ClassicallyControlledCz,
        GateKind::Reset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "not",
            GateKind::Cnot => "cnot",
            GateKind::Toffoli => "toffoli",
            GateKind::TemporaryAnd => "temporary_and",
            GateKind::Uncompute => "uncompute",
            GateKind::H => "h",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Z => "z",
            GateKind::Cz => "cz",
            GateKind::MeasureX => "measure_x",
            GateKind::ClassicallyControlledCz => "cc_cz",
            GateKind::Reset => "reset",
        }
    }

    /// Whether the kind may appear in a circuit of the given level.
    pub fn allowed_at(self, level: Level) -> bool {
        match self {
            GateKind::Not | GateKind::Cnot | GateKind::Reset => true,
            GateKind::Toffoli | GateKind::TemporaryAnd | GateKind::Uncompute => {
                level == Level::ToffoliLevel
            }
            _ => level == Level::CliffordTLevel,
        }
    }
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not(_) => GateKind::Not,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
            Gate::TemporaryAnd { .. } => GateKind::TemporaryAnd,
            Gate::Uncompute { .. } => GateKind::Uncompute,
            Gate::H(_) => GateKind::H,
            Gate::T(_) => GateKind::T,
            Gate::Tdg(_) => GateKind::Tdg,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::Z(_) => GateKind::Z,
            Gate::Cz(..) => GateKind::Cz,
            Gate::MeasureX { .. } => GateKind::MeasureX,
            Gate::ClassicallyControlledCz { .. } => GateKind::ClassicallyControlledCz,
            Gate::Reset(_) => GateKind::Reset,
        }
    }

    /// Operand qubits, controls first.
    pub fn qubits(&self) -> Operands {
        match *self {
            Gate::Not(q)
            | Gate::H(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::Z(q)
            | Gate::Reset(q)
            | Gate::MeasureX { qubit: q, .. } => Operands::one(q),
            Gate::Cnot { control, target } => Operands::two(control, target),
            Gate::Cz(a, b) | Gate::ClassicallyControlledCz { a, b, .. } => Operands::two(a, b),
            Gate::Toffoli { c1, c2, target }
            | Gate::TemporaryAnd { c1, c2, target }
            | Gate::Uncompute { c1, c2, target } => Operands::three(c1, c2, target),
        }
    }

    pub fn cbit(&self) -> Option<Cbit> {
        match *self {
            Gate::MeasureX { cbit, .. } | Gate::ClassicallyControlledCz { cbit, .. } => Some(cbit),
            _ => None,
        }
    }

    pub fn is_t_type(&self) -> bool {
        matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    /// Rebuild a gate from its kind, operands (in [`Gate::qubits`] order) and
    /// classical bit. `None` if the parts do not fit the kind.
    pub fn from_parts(kind: GateKind, qubits: &[Qubit], cbit: Option<Cbit>) -> Option<Gate> {
        use GateKind as K;
        let g = match (kind, qubits, cbit) {
            (K::Not, &[q], None) => Gate::Not(q),
            (K::H, &[q], None) => Gate::H(q),
            (K::T, &[q], None) => Gate::T(q),
            (K::Tdg, &[q], None) => Gate::Tdg(q),
            (K::S, &[q], None) => Gate::S(q),
            (K::Sdg, &[q], None) => Gate::Sdg(q),
            (K::Z, &[q], None) => Gate::Z(q),
            (K::Reset, &[q], None) => Gate::Reset(q),
            (K::MeasureX, &[qubit], Some(cbit)) => Gate::MeasureX { qubit, cbit },
            (K::Cnot, &[control, target], None) => Gate::Cnot { control, target },
            (K::Cz, &[a, b], None) => Gate::Cz(a, b),
            (K::ClassicallyControlledCz, &[a, b], Some(cbit)) => {
                Gate::ClassicallyControlledCz { cbit, a, b }
            }
            (K::Toffoli, &[c1, c2, target], None) => Gate::Toffoli { c1, c2, target },
            (K::TemporaryAnd, &[c1, c2, target], None) => Gate::TemporaryAnd { c1, c2, target },
            (K::Uncompute, &[c1, c2, target], None) => Gate::Uncompute { c1, c2, target },
            _ => return None,
        };
        Some(g)
    }
}

/// Up to three operand qubits without allocating.
#[derive(Clone, Copy, Debug)]
pub struct Operands {
    qubits: [Qubit; 3],
    len: usize,
}

impl Operands {
    fn one(a: Qubit) -> Self {
        Operands {
            qubits: [a, a, a],
            len: 1,
        }
    }
    fn two(a: Qubit, b: Qubit) -> Self {
        Operands {
            qubits: [a, b, b],
            len: 2,
        }
    }
    fn three(a: Qubit, b: Qubit, c: Qubit) -> Self {
        Operands {
            qubits: [a, b, c],
            len: 3,
        }
    }

    pub fn as_slice(&self) -> &[Qubit] {
        &self.qubits[..self.len]
    }

    pub fn has_duplicates(&self) -> bool {
        let s = self.as_slice();
        (0..s.len()).any(|i| s[i + 1..].contains(&s[i]))
    }
}

impl<'a> IntoIterator for &'a Operands {
    type Item = &'a Qubit;
    type IntoIter = std::slice::Iter<'a, Qubit>;
    fn into_iter(self) -> Self::IntoIter {
        self.as_slice().iter()
    }
}

/// Semantic value currently held by a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WireLabel {
    A(usize),
    B(usize),
    /// Propagate span `p[j,k]`.
    P(usize, usize),
    /// Generate span `g[j,k]`.
    G(usize, usize),
    /// Sum bit.
    S(usize),
    Free,
    Spent,
}

impl WireLabel {
    /// Free and spent may label any number of wires; everything else is unique.
    pub fn is_unique(self) -> bool {
        !matches!(self, WireLabel::Free | WireLabel::Spent)
    }
}

impl fmt::Display for WireLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireLabel::A(i) => write!(f, "a_{i}"),
            WireLabel::B(i) => write!(f, "b_{i}"),
            WireLabel::P(j, k) => write!(f, "p[{j},{k}]"),
            WireLabel::G(j, k) => write!(f, "g[{j},{k}]"),
            WireLabel::S(i) => write!(f, "s_{i}"),
            WireLabel::Free => f.write_str("free"),
            WireLabel::Spent => f.write_str("spent"),
        }
    }
}

impl std::str::FromStr for WireLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad wire label `{s}`");
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let span = |t: &str| -> Result<(usize, usize), String> {
            let inner = t
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (j, k) = inner.split_once(',').ok_or_else(bad)?;
            Ok((num(j)?, num(k)?))
        };
        match s {
            "free" => return Ok(WireLabel::Free),
            "spent" => return Ok(WireLabel::Spent),
            _ => {}
        }
        if let Some(r) = s.strip_prefix("a_") {
            Ok(WireLabel::A(num(r)?))
        } else if let Some(r) = s.strip_prefix("b_") {
            Ok(WireLabel::B(num(r)?))
        } else if let Some(r) = s.strip_prefix("s_") {
            Ok(WireLabel::S(num(r)?))
        } else if let Some(r) = s.strip_prefix('p') {
            let (j, k) = span(r)?;
            Ok(WireLabel::P(j, k))
        } else if let Some(r) = s.strip_prefix('g') {
            let (j, k) = span(r)?;
            Ok(WireLabel::G(j, k))
        } else {
            Err(bad())
        }
    }
}

/// Current semantic label of every qubit. Relabeling never moves a value to a
/// different qubit; it only renames the wire.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WireNameMap {
    labels: Vec<WireLabel>,
    lookup: HashMap<WireLabel, Qubit>,
}

impl WireNameMap {
    pub fn get(&self, q: Qubit) -> WireLabel {
        self.labels[q.index()]
    }

    /// Qubit currently carrying a unique label.
    pub fn find(&self, label: WireLabel) -> Option<Qubit> {
        self.lookup.get(&label).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Qubit, WireLabel)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (Qubit(i as u32), *l))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn push(&mut self, label: WireLabel) -> Result<(), CircuitError> {
        let q = Qubit(self.labels.len() as u32);
        self.labels.push(WireLabel::Free);
        self.relabel(q, label)
    }

    pub fn relabel(&mut self, q: Qubit, label: WireLabel) -> Result<(), CircuitError> {
        if label.is_unique() {
            if let Some(&other) = self.lookup.get(&label) {
                if other != q {
                    return Err(CircuitError::DuplicateLabel(label.to_string()));
                }
            }
        }
        let old = std::mem::replace(&mut self.labels[q.index()], label);
        if old.is_unique() && self.lookup.get(&old) == Some(&q) {
            self.lookup.remove(&old);
        }
        if label.is_unique() {
            self.lookup.insert(label, q);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterKind {
    /// Operand register supplied by the caller.
    Input,
    /// Constant-initialised helper qubits.
    Ancilla,
    /// Ancilla register grown on demand by [`Circuit::allocate_ancilla`].
    Scratch,
}

/// One row of the register table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub kind: RegisterKind,
    pub qubits: Vec<Qubit>,
}

impl Register {
    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

/// Constructor argument for [`Circuit::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterSpec {
    pub name: String,
    pub kind: RegisterKind,
    /// One entry per qubit. Input registers use `None`.
    pub inits: Vec<Option<AncillaInit>>,
}

impl RegisterSpec {
    pub fn input(name: impl Into<String>, len: usize) -> Self {
        RegisterSpec {
            name: name.into(),
            kind: RegisterKind::Input,
            inits: vec![None; len],
        }
    }

    pub fn ancilla(name: impl Into<String>, inits: impl IntoIterator<Item = AncillaInit>) -> Self {
        RegisterSpec {
            name: name.into(),
            kind: RegisterKind::Ancilla,
            inits: inits.into_iter().map(Some).collect(),
        }
    }

    /// Empty register that [`Circuit::allocate_ancilla`] grows.
    pub fn scratch(name: impl Into<String>) -> Self {
        RegisterSpec {
            name: name.into(),
            kind: RegisterKind::Scratch,
            inits: Vec::new(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),
    #[error("register `{0}` mixes input and ancilla qubits")]
    MixedRegister(String),
    #[error("gate #{index}: operand {qubit} does not resolve in the register table")]
    UnresolvedOperand { index: usize, qubit: u32 },
    #[error("gate #{index}: duplicate operand qubit")]
    DuplicateOperand { index: usize },
    #[error("gate #{index}: {kind} is not allowed in a {level:?} circuit")]
    LevelMismatch {
        index: usize,
        kind: &'static str,
        level: Level,
    },
    #[error("gate #{index}: classical bit {cbit} is out of order or undefined")]
    BadCbit { index: usize, cbit: u32 },
    #[error("gate #{index}: temporary AND target {target} is not an unused MagicA ancilla")]
    AndTargetNotFresh {
        index: usize,
        target: QubitRefDisplay,
    },
    #[error("gate #{index}: reset of non-ancilla qubit {target}")]
    ResetInput {
        index: usize,
        target: QubitRefDisplay,
    },
    #[error("wire label `{0}` is already in use")]
    DuplicateLabel(String),
    #[error("only one scratch register is allowed")]
    MultipleScratch,
}

/// Printable qubit reference carried inside errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitRefDisplay(pub String);

impl fmt::Display for QubitRefDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct QubitInfo {
    register: usize,
    index: usize,
    init: Option<AncillaInit>,
}

/// An ordered gate list over a register table.
///
/// Gates can only be appended. Every appended gate is validated against the
/// register table, the circuit level, and (for temporary ANDs) the freshness
/// of the target ancilla.
#[derive(Clone, Debug)]
pub struct Circuit {
    registers: Vec<Register>,
    qubits: Vec<QubitInfo>,
    gates: Vec<Gate>,
    num_cbits: u32,
    level: Level,
    labels: WireNameMap,
    scratch: Option<usize>,
    // build-time bookkeeping, not part of the circuit's identity
    touched: Vec<bool>,
    freed: VecDeque<Qubit>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.registers == other.registers
            && self.qubits == other.qubits
            && self.gates == other.gates
            && self.num_cbits == other.num_cbits
            && self.level == other.level
    }
}

impl Circuit {
    /// Empty ToffoliLevel circuit over the given registers. Qubit ids are
    /// assigned in register-table order.
    pub fn new(specs: &[RegisterSpec]) -> Result<Circuit, CircuitError> {
        Self::with_level(specs, Level::ToffoliLevel)
    }

    pub fn with_level(specs: &[RegisterSpec], level: Level) -> Result<Circuit, CircuitError> {
        let mut c = Circuit {
            registers: Vec::new(),
            qubits: Vec::new(),
            gates: Vec::new(),
            num_cbits: 0,
            level,
            labels: WireNameMap::default(),
            scratch: None,
            touched: Vec::new(),
            freed: VecDeque::new(),
        };
        for spec in specs {
            if c.registers.iter().any(|r| r.name == spec.name) {
                return Err(CircuitError::DuplicateRegister(spec.name.clone()));
            }
            let is_input = spec.kind == RegisterKind::Input;
            if spec.inits.iter().any(|i| i.is_some() == is_input) {
                return Err(CircuitError::MixedRegister(spec.name.clone()));
            }
            if spec.kind == RegisterKind::Scratch {
                if c.scratch.is_some() {
                    return Err(CircuitError::MultipleScratch);
                }
                c.scratch = Some(c.registers.len());
            }
            let reg = c.registers.len();
            c.registers.push(Register {
                name: spec.name.clone(),
                kind: spec.kind.clone(),
                qubits: Vec::new(),
            });
            for &init in &spec.inits {
                c.push_qubit(reg, init);
            }
        }
        Ok(c)
    }

    /// Empty circuit with the same register table and wire labels but a
    /// different level.
    pub fn empty_like(&self, level: Level) -> Circuit {
        Circuit {
            registers: self.registers.clone(),
            qubits: self.qubits.clone(),
            gates: Vec::new(),
            num_cbits: 0,
            level,
            labels: self.labels.clone(),
            scratch: self.scratch,
            touched: vec![false; self.qubits.len()],
            freed: VecDeque::new(),
        }
    }

    fn push_qubit(&mut self, reg: usize, init: Option<AncillaInit>) -> Qubit {
        let q = Qubit(self.qubits.len() as u32);
        let index = self.registers[reg].qubits.len();
        self.registers[reg].qubits.push(q);
        self.qubits.push(QubitInfo {
            register: reg,
            index,
            init,
        });
        self.touched.push(false);
        // every wire starts out `free`; builders assign semantic labels
        self.labels
            .push(WireLabel::Free)
            .expect("free labels never collide");
        q
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn num_cbits(&self) -> usize {
        self.num_cbits as usize
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    /// The register table as constructor arguments, with current inits.
    pub fn register_specs(&self) -> Vec<RegisterSpec> {
        self.registers
            .iter()
            .map(|r| RegisterSpec {
                name: r.name.clone(),
                kind: r.kind.clone(),
                inits: r.qubits.iter().map(|&q| self.init(q)).collect(),
            })
            .collect()
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn init(&self, q: Qubit) -> Option<AncillaInit> {
        self.qubits[q.index()].init
    }

    /// Override the declared init of an ancilla. Used by lowering, which
    /// prepares magic states explicitly.
    pub(crate) fn set_init(&mut self, q: Qubit, init: AncillaInit) {
        if let Some(slot) = self.qubits.get_mut(q.index()) {
            if slot.init.is_some() {
                slot.init = Some(init);
            }
        }
    }

    pub fn is_ancilla(&self, q: Qubit) -> bool {
        self.qubits[q.index()].init.is_some()
    }

    pub fn qubit_ref(&self, q: Qubit) -> QubitRef {
        let info = &self.qubits[q.index()];
        QubitRef::new(self.registers[info.register].name.clone(), info.index)
    }

    pub fn resolve(&self, r: &QubitRef) -> Option<Qubit> {
        self.register(&r.register)
            .and_then(|reg| reg.qubits.get(r.index).copied())
    }

    pub fn labels(&self) -> &WireNameMap {
        &self.labels
    }

    pub fn relabel(&mut self, q: Qubit, label: WireLabel) -> Result<(), CircuitError> {
        self.labels.relabel(q, label)
    }

    /// Next classical bit to be written by a measurement.
    pub fn next_cbit(&self) -> Cbit {
        Cbit(self.num_cbits)
    }

    /// Append a gate after validating operands, level and ancilla state.
    pub fn append(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let index = self.gates.len();
        let ops = gate.qubits();
        for q in &ops {
            if q.index() >= self.qubits.len() {
                return Err(CircuitError::UnresolvedOperand { index, qubit: q.0 });
            }
        }
        if ops.has_duplicates() {
            return Err(CircuitError::DuplicateOperand { index });
        }
        let kind = gate.kind();
        if !kind.allowed_at(self.level) {
            return Err(CircuitError::LevelMismatch {
                index,
                kind: kind.name(),
                level: self.level,
            });
        }
        match gate {
            Gate::MeasureX { cbit, .. } if cbit.0 != self.num_cbits => {
                return Err(CircuitError::BadCbit {
                    index,
                    cbit: cbit.0,
                });
            }
            Gate::ClassicallyControlledCz { cbit, .. } if cbit.0 >= self.num_cbits => {
                return Err(CircuitError::BadCbit {
                    index,
                    cbit: cbit.0,
                });
            }
            Gate::TemporaryAnd { target, .. } => {
                if self.init(target) != Some(AncillaInit::MagicA) || self.touched[target.index()] {
                    return Err(CircuitError::AndTargetNotFresh {
                        index,
                        target: QubitRefDisplay(self.qubit_ref(target).to_string()),
                    });
                }
            }
            Gate::Reset(q) if !self.is_ancilla(q) => {
                return Err(CircuitError::ResetInput {
                    index,
                    target: QubitRefDisplay(self.qubit_ref(q).to_string()),
                });
            }
            _ => {}
        }

        if let Gate::MeasureX { .. } = gate {
            self.num_cbits += 1;
        }
        if let Gate::Reset(q) = gate {
            self.touched[q.index()] = false;
        } else {
            for q in &ops {
                self.touched[q.index()] = true;
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Allocate an ancilla in the scratch register (created as `anc` on first
    /// use if the circuit has none). `Reuse` returns the earliest-freed qubit
    /// of matching init, after appending a [`Gate::Reset`] on it.
    pub fn allocate_ancilla(&mut self, init: AncillaInit, policy: AllocPolicy) -> Qubit {
        if policy == AllocPolicy::Reuse {
            let found = self.freed.iter().position(|&q| self.init(q) == Some(init));
            if let Some(pos) = found {
                let q = self.freed.remove(pos).expect("position is in range");
                if self.touched[q.index()] {
                    self.append(Gate::Reset(q))
                        .expect("reset of an ancilla is always valid");
                }
                self.labels
                    .relabel(q, WireLabel::Free)
                    .expect("free labels never collide");
                return q;
            }
        }
        let reg = match self.scratch {
            Some(r) => r,
            None => {
                let r = self.registers.len();
                self.registers.push(Register {
                    name: "anc".to_string(),
                    kind: RegisterKind::Scratch,
                    qubits: Vec::new(),
                });
                self.scratch = Some(r);
                r
            }
        };
        self.push_qubit(reg, Some(init))
    }

    /// Return an ancilla to the allocator's free pool. Only [`AllocPolicy::Reuse`]
    /// ever hands it out again.
    pub fn free(&mut self, q: Qubit) {
        if self.is_ancilla(q) && !self.freed.contains(&q) {
            self.freed.push_back(q);
        }
    }

    /// Restore the label table (used when reconstructing a circuit from an
    /// exported file).
    pub(crate) fn set_labels(&mut self, labels: Vec<WireLabel>) -> Result<(), CircuitError> {
        let mut map = WireNameMap::default();
        for l in labels {
            map.push(l)?;
        }
        self.labels = map;
        Ok(())
    }
}
