//! Dense statevector simulation of Clifford+T circuits with mid-circuit
//! X-basis measurement.
//!
//! Qubit `i` of the register table is bit `i` of the amplitude index.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{AncillaInit, Cbit, Circuit, Gate, Level, Qubit, RegisterSpec, WireLabel};
use crate::lowering::{lower_temporary_and, lower_toffoli, lower_uncompute};
use crate::revsim::BasisState;

pub const DEFAULT_QUBIT_CAP: usize = 24;
pub const DEFAULT_BRANCH_LIMIT: usize = 1 << 12;
pub const DEFAULT_SEED: u64 = 42;
/// Branches below this probability are dropped.
pub const PRUNE: f64 = 1e-12;
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Seed from `QCLA_SEED`, falling back to [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("QCLA_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(
            amps.len().is_power_of_two(),
            "amplitude count must be a power of two"
        );
        StateVector {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn map_pairs(&mut self, q: Qubit, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let bit = 1usize << q.index();
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = f(self.amps[i], self.amps[i | bit]);
                self.amps[i] = a;
                self.amps[i | bit] = b;
            }
        }
    }

    fn phase_where(&mut self, mask: usize, phase: Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= phase;
            }
        }
    }

    fn flip_where(&mut self, controls: usize, target: Qubit) {
        let bit = 1usize << target.index();
        for i in 0..self.amps.len() {
            if i & bit == 0 && i & controls == controls {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn x(&mut self, q: Qubit) {
        self.flip_where(0, q);
    }

    pub fn h(&mut self, q: Qubit) {
        let s = FRAC_1_SQRT_2;
        self.map_pairs(q, |a, b| ((a + b) * s, (a - b) * s));
    }

    /// Probability of reading 1 on `q`.
    pub fn prob_one(&self, q: Qubit) -> f64 {
        let bit = 1usize << q.index();
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Project `q` onto `outcome` and renormalise. Returns the outcome's
    /// probability.
    pub fn project(&mut self, q: Qubit, outcome: bool) -> f64 {
        let p1 = self.prob_one(q);
        let p = if outcome { p1 } else { 1.0 - p1 };
        let bit = 1usize << q.index();
        let scale = if p > 0.0 { 1.0 / p.sqrt() } else { 0.0 };
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        p
    }

    /// Apply a unitary gate. Measurement-related gates are handled by the
    /// simulator loop.
    fn apply_unitary(&mut self, gate: &Gate) {
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let i = Complex64::new(0.0, 1.0);
        let m = |q: Qubit| 1usize << q.index();
        match *gate {
            Gate::Not(q) => self.x(q),
            Gate::Cnot { control, target } => self.flip_where(m(control), target),
            Gate::Toffoli { c1, c2, target } => self.flip_where(m(c1) | m(c2), target),
            Gate::H(q) => self.h(q),
            Gate::T(q) => self.phase_where(m(q), w),
            Gate::Tdg(q) => self.phase_where(m(q), w.conj()),
            Gate::S(q) => self.phase_where(m(q), i),
            Gate::Sdg(q) => self.phase_where(m(q), -i),
            Gate::Z(q) => self.phase_where(m(q), Complex64::new(-1.0, 0.0)),
            Gate::Cz(a, b) => self.phase_where(m(a) | m(b), Complex64::new(-1.0, 0.0)),
            _ => unreachable!("non-unitary gate {gate:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasurementStrategy {
    SeededRandom(u64),
    FixedOutcomes(Vec<bool>),
    AllBranches,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub qubit_cap: usize,
    pub branch_limit: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            qubit_cap: DEFAULT_QUBIT_CAP,
            branch_limit: DEFAULT_BRANCH_LIMIT,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Serialize)]
pub enum SimError {
    #[error("{got} qubits exceeds the cap of {cap}")]
    QubitCap { got: usize, cap: usize },
    #[error("circuit must be at Clifford+T level")]
    WrongLevel,
    #[error("input state has {got} qubits, circuit has {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("labelled output {label} on qubit {qubit} is not classical (p1 = {p1})")]
    NonClassicalOutput { qubit: u32, label: String, p1: f64 },
    #[error("gate {index}: reset of a qubit that is not classical (p1 = {p1})")]
    NonClassicalReset { index: usize, p1: f64 },
    #[error("more than {0} measurement branches")]
    BranchLimit(usize),
    #[error("{expected} fixed outcomes needed, {got} given")]
    OutcomeCount { expected: usize, got: usize },
    #[error("gate {index}: fixed outcome has probability {p}")]
    ImpossibleOutcome { index: usize, p: f64 },
    #[error("gate {index}: norm drifted to {norm}")]
    NormDrift { index: usize, norm: f64 },
}

/// One measurement branch of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub cbits: Vec<bool>,
    pub probability: f64,
    /// Final value of every qubit whose wire label is neither free nor
    /// spent, keyed by qubit id.
    pub readout: BTreeMap<u32, bool>,
}

impl Outcome {
    /// Little-endian value of `wires`; `None` if any wire is not a labelled
    /// output.
    pub fn value(&self, wires: &[Qubit]) -> Option<u128> {
        wires.iter().enumerate().try_fold(0u128, |acc, (i, q)| {
            self.readout.get(&q.0).map(|&b| acc | (b as u128) << i)
        })
    }
}

/// Initial amplitudes for `circuit`: inputs and zero ancillae from `input`,
/// magic-state ancillae in `(|0⟩ + e^{iπ/4}|1⟩)/√2`.
pub fn initial_state(circuit: &Circuit, input: &BasisState) -> StateVector {
    let nq = circuit.num_qubits();
    let mut index = 0usize;
    let mut magic = Vec::new();
    for q in (0..nq as u32).map(Qubit) {
        if circuit.init(q) == Some(AncillaInit::MagicA) {
            magic.push(q);
        } else if input.bit(q) {
            index |= 1 << q.index();
        }
    }
    let mut sv = StateVector::basis(nq, index);
    for q in magic {
        sv.h(q);
        sv.apply_unitary(&Gate::T(q));
    }
    sv
}

struct Run<'a> {
    circuit: &'a Circuit,
    strategy: &'a MeasurementStrategy,
    limit: usize,
    branches: AtomicUsize,
    outputs: Vec<(Qubit, WireLabel)>,
}

impl Run<'_> {
    fn go(
        &self,
        mut sv: StateVector,
        start: usize,
        mut cbits: Vec<bool>,
        mut prob: f64,
        rng: &mut Option<ChaCha8Rng>,
    ) -> Result<Vec<Outcome>, SimError> {
        let gates = self.circuit.gates();
        for (index, gate) in gates.iter().enumerate().skip(start) {
            match *gate {
                Gate::MeasureX { qubit, .. } => {
                    sv.h(qubit);
                    let p1 = sv.prob_one(qubit);
                    let chosen = match self.strategy {
                        MeasurementStrategy::AllBranches => {
                            let mut live = Vec::new();
                            for (outcome, p) in [(false, 1.0 - p1), (true, p1)] {
                                if p >= PRUNE {
                                    live.push(outcome);
                                }
                            }
                            if live.len() == 2 {
                                if self.branches.fetch_add(1, Ordering::Relaxed) + 1 > self.limit {
                                    return Err(SimError::BranchLimit(self.limit));
                                }
                                let fork = |outcome: bool| {
                                    let mut s = sv.clone();
                                    let p = s.project(qubit, outcome);
                                    let mut c = cbits.clone();
                                    c.push(outcome);
                                    self.go(s, index + 1, c, prob * p, &mut None)
                                };
                                let (zero, one) = rayon::join(|| fork(false), || fork(true));
                                let mut all = zero?;
                                all.extend(one?);
                                return Ok(all);
                            }
                            live[0]
                        }
                        MeasurementStrategy::SeededRandom(_) => {
                            let r = rng.as_mut().expect("seeded runs carry a generator");
                            r.gen::<f64>() < p1
                        }
                        MeasurementStrategy::FixedOutcomes(list) => list[cbits.len()],
                    };
                    let p = sv.project(qubit, chosen);
                    if p < PRUNE {
                        return Err(SimError::ImpossibleOutcome { index, p });
                    }
                    prob *= p;
                    cbits.push(chosen);
                }
                Gate::ClassicallyControlledCz { cbit, a, b } => {
                    if cbits[cbit.index()] {
                        sv.apply_unitary(&Gate::Cz(a, b));
                    }
                }
                Gate::Reset(q) => {
                    let p1 = sv.prob_one(q);
                    if p1 > 1.0 - NORM_TOLERANCE {
                        sv.x(q);
                    } else if p1 > NORM_TOLERANCE {
                        return Err(SimError::NonClassicalReset { index, p1 });
                    }
                }
                _ => sv.apply_unitary(gate),
            }
            let norm = sv.norm_sqr();
            if (norm - 1.0).abs() > NORM_TOLERANCE {
                return Err(SimError::NormDrift { index, norm });
            }
        }
        let mut readout = BTreeMap::new();
        for &(q, label) in &self.outputs {
            let p1 = sv.prob_one(q);
            let bit = if p1 > 1.0 - NORM_TOLERANCE {
                true
            } else if p1 < NORM_TOLERANCE {
                false
            } else {
                return Err(SimError::NonClassicalOutput {
                    qubit: q.0,
                    label: label.to_string(),
                    p1,
                });
            };
            readout.insert(q.0, bit);
        }
        Ok(vec![Outcome {
            cbits,
            probability: prob,
            readout,
        }])
    }
}

/// Simulate with the default qubit cap and branch limit.
pub fn simulate(
    circuit: &Circuit,
    input: &BasisState,
    strategy: &MeasurementStrategy,
) -> Result<Vec<Outcome>, SimError> {
    simulate_with(circuit, input, strategy, SimConfig::default())
}

pub fn simulate_with(
    circuit: &Circuit,
    input: &BasisState,
    strategy: &MeasurementStrategy,
    config: SimConfig,
) -> Result<Vec<Outcome>, SimError> {
    if circuit.level() != Level::CliffordTLevel {
        return Err(SimError::WrongLevel);
    }
    let nq = circuit.num_qubits();
    if nq > config.qubit_cap {
        return Err(SimError::QubitCap {
            got: nq,
            cap: config.qubit_cap,
        });
    }
    if input.len() != nq {
        return Err(SimError::WrongSize {
            expected: nq,
            got: input.len(),
        });
    }
    if let MeasurementStrategy::FixedOutcomes(list) = strategy {
        let expected = circuit
            .gates()
            .iter()
            .filter(|g| matches!(g, Gate::MeasureX { .. }))
            .count();
        if list.len() != expected {
            return Err(SimError::OutcomeCount {
                expected,
                got: list.len(),
            });
        }
    }
    let outputs = circuit
        .labels()
        .iter()
        .filter(|(_, l)| l.is_unique())
        .collect();
    let run = Run {
        circuit,
        strategy,
        limit: config.branch_limit,
        branches: AtomicUsize::new(1),
        outputs,
    };
    let mut rng = match strategy {
        MeasurementStrategy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    run.go(initial_state(circuit, input), 0, Vec::new(), 1.0, &mut rng)
}

/// Gadgets whose lowering is certified against the logical action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Gadget {
    ToffoliLowering,
    AndLowering,
    AndUncomputePair,
}

impl Gadget {
    pub const ALL: [Gadget; 3] = [
        Gadget::ToffoliLowering,
        Gadget::AndLowering,
        Gadget::AndUncomputePair,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GadgetCheck {
    pub gadget: Gadget,
    pub pass: bool,
    pub max_deviation: f64,
    /// Basis inputs times measurement branches compared.
    pub cases: usize,
}

pub const GADGET_TOLERANCE: f64 = 1e-10;

fn gadget_circuit(qubits: usize, ancilla: bool, gates: &[Gate]) -> Circuit {
    let mut specs = vec![RegisterSpec::input("q", qubits)];
    if ancilla {
        specs.push(RegisterSpec::ancilla("anc", [AncillaInit::Zero]));
    }
    let mut c = Circuit::with_level(&specs, Level::CliffordTLevel).expect("fixed register table");
    for &g in gates {
        c.append(g).expect("gadget gates are well formed");
    }
    c
}

/// Run `circuit` from `|index⟩` with fixed outcomes and return the final
/// state and branch probability.
fn run_from(circuit: &Circuit, index: usize, outcomes: &[bool]) -> (StateVector, f64) {
    let mut sv = StateVector::basis(circuit.num_qubits(), index);
    let mut cbits = Vec::new();
    let mut prob = 1.0;
    for g in circuit.gates() {
        match *g {
            Gate::MeasureX { qubit, .. } => {
                sv.h(qubit);
                let o = outcomes[cbits.len()];
                prob *= sv.project(qubit, o);
                cbits.push(o);
            }
            Gate::ClassicallyControlledCz { cbit, a, b } => {
                if cbits[cbit.index()] {
                    sv.apply_unitary(&Gate::Cz(a, b));
                }
            }
            _ => sv.apply_unitary(g),
        }
    }
    (sv, prob)
}

/// Largest `|out_i − e^{iφ}·expected_i|` over all cases, with one global
/// phase `φ` fixed from the first case.
fn deviation(cases: &[(StateVector, usize)]) -> f64 {
    let (first, idx) = &cases[0];
    let phase = first.amps[*idx] / first.amps[*idx].norm();
    cases
        .iter()
        .map(|(sv, idx)| {
            sv.amps
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let want = if i == *idx {
                        phase
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    (a - want).norm()
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Compare a gadget's lowering against its logical action on every basis
/// input, modulo one global phase (per measurement branch).
pub fn gadget_unitary_check(gadget: Gadget) -> GadgetCheck {
    let (x, y, t, anc) = (Qubit(0), Qubit(1), Qubit(2), Qubit(3));
    let toffoli = |i: usize| i ^ (((i & 1) & (i >> 1 & 1)) << 2);
    let (max_deviation, cases) = match gadget {
        Gadget::ToffoliLowering => {
            let c = gadget_circuit(3, false, &lower_toffoli(x, y, t).expect("distinct"));
            let runs: Vec<_> = (0..8)
                .map(|i| (run_from(&c, i, &[]).0, toffoli(i)))
                .collect();
            (deviation(&runs), runs.len())
        }
        Gadget::AndLowering => {
            // the ancilla is qubit 2 and starts in |0⟩; the gadget prepares
            // the magic state itself
            let c = gadget_circuit(2, true, &lower_temporary_and(x, y, t).expect("distinct"));
            let runs: Vec<_> = (0..4)
                .map(|i| (run_from(&c, i, &[]).0, toffoli(i)))
                .collect();
            (deviation(&runs), runs.len())
        }
        Gadget::AndUncomputePair => {
            let mut gates = lower_temporary_and(x, y, anc).expect("distinct");
            gates.push(Gate::Cnot {
                control: anc,
                target: t,
            });
            gates.extend(lower_uncompute(x, y, anc, Cbit(0)).expect("distinct"));
            let c = gadget_circuit(3, true, &gates);
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for m in [false, true] {
                let runs: Vec<_> = (0..8)
                    .map(|i| {
                        let (sv, p) = run_from(&c, i, &[m]);
                        worst = worst.max((p - 0.5).abs());
                        (sv, toffoli(i) | (m as usize) << 3)
                    })
                    .collect();
                worst = worst.max(deviation(&runs));
                count += runs.len();
            }
            (worst, count)
        }
    };
    GadgetCheck {
        gadget,
        pass: max_deviation < GADGET_TOLERANCE,
        max_deviation,
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{adder_io, build, DesignId};
    use crate::lowering::{lower, LoweringPolicy};
    use crate::revsim::adder_input;

    #[test]
    fn gadgets_certify() {
        for g in Gadget::ALL {
            let r = gadget_unitary_check(g);
            assert!(r.pass, "{r:?}");
        }
        assert_eq!(gadget_unitary_check(Gadget::AndUncomputePair).cases, 16);
    }

    #[test]
    fn and_on_superposed_controls() {
        let (x, y, a) = (Qubit(0), Qubit(1), Qubit(2));
        let c = gadget_circuit(2, true, &lower_temporary_and(x, y, a).unwrap());
        // H|0⟩ ⊗ H|0⟩ in, (1/2) Σ |x, y, x·y⟩ out up to a global phase
        let mut sv = StateVector::basis(3, 0);
        sv.h(x);
        sv.h(y);
        for g in c.gates() {
            sv.apply_unitary(g);
        }
        let phase = sv.amps[0] / sv.amps[0].norm();
        for i in 0..4usize {
            let j = i | ((i & 1) & (i >> 1)) << 2;
            assert!((sv.amps[j] - phase * 0.5).norm() < 1e-10);
        }
    }

    #[test]
    fn and_body_on_magic_state_matches_inline_prep() {
        let (x, y, a) = (Qubit(0), Qubit(1), Qubit(2));
        let full = lower_temporary_and(x, y, a).unwrap();
        let mut c = Circuit::with_level(
            &[
                RegisterSpec::input("q", 2),
                RegisterSpec::ancilla("anc", [AncillaInit::MagicA]),
            ],
            Level::CliffordTLevel,
        )
        .unwrap();
        for &g in &full[2..] {
            c.append(g).unwrap();
        }
        c.relabel(a, WireLabel::G(0, 1)).unwrap();
        let mut input = BasisState::zeros(3);
        input.write(&[x, y], 0b11);
        let out = simulate(&c, &input, &MeasurementStrategy::AllBranches).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].value(&[a]), Some(1));
        assert!((out[0].probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adder_branches_agree() {
        let d = DesignId::OutFtQcla1;
        let c = lower(&build(d, 2).unwrap(), LoweringPolicy::default()).unwrap();
        let io = adder_io(&c, d).unwrap();
        let out = simulate(
            &c,
            &adder_input(&c, &io, 1, 3),
            &MeasurementStrategy::AllBranches,
        )
        .unwrap();
        assert!(!out.is_empty());
        let total: f64 = out.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
        for o in &out {
            assert_eq!(o.value(&io.sum), Some(4));
        }
    }

    #[test]
    fn strategies() {
        let d = DesignId::InFtQcla1;
        let c = lower(&build(d, 2).unwrap(), LoweringPolicy::default()).unwrap();
        let io = adder_io(&c, d).unwrap();
        let input = adder_input(&c, &io, 3, 2);
        let seeded = simulate(&c, &input, &MeasurementStrategy::SeededRandom(7)).unwrap();
        assert_eq!(seeded.len(), 1);
        assert_eq!(seeded[0].value(&io.sum), Some(5));
        assert_eq!(
            seeded,
            simulate(&c, &input, &MeasurementStrategy::SeededRandom(7)).unwrap()
        );
        let fixed = MeasurementStrategy::FixedOutcomes(vec![true; c.num_cbits()]);
        assert_eq!(
            simulate(&c, &input, &fixed).unwrap()[0].value(&io.sum),
            Some(5)
        );
        let short = MeasurementStrategy::FixedOutcomes(vec![]);
        assert!(matches!(
            simulate(&c, &input, &short),
            Err(SimError::OutcomeCount { .. })
        ));
    }

    #[test]
    fn limits() {
        let d = DesignId::OutFtQcla1;
        let c = lower(&build(d, 3).unwrap(), LoweringPolicy::default()).unwrap();
        let input = BasisState::zeros(c.num_qubits());
        let tight = SimConfig {
            qubit_cap: 4,
            ..SimConfig::default()
        };
        assert!(matches!(
            simulate_with(&c, &input, &MeasurementStrategy::AllBranches, tight),
            Err(SimError::QubitCap { cap: 4, .. })
        ));
        let few = SimConfig {
            branch_limit: 1,
            ..SimConfig::default()
        };
        assert_eq!(
            simulate_with(&c, &input, &MeasurementStrategy::AllBranches, few),
            Err(SimError::BranchLimit(1))
        );
        assert_eq!(
            simulate(
                &build(d, 1).unwrap(),
                &BasisState::zeros(3),
                &MeasurementStrategy::AllBranches
            ),
            Err(SimError::WrongLevel)
        );
    }

    #[test]
    fn non_classical_output_is_an_error() {
        let mut c =
            Circuit::with_level(&[RegisterSpec::input("q", 1)], Level::CliffordTLevel).unwrap();
        c.append(Gate::H(Qubit(0))).unwrap();
        c.relabel(Qubit(0), WireLabel::S(0)).unwrap();
        assert!(matches!(
            simulate(&c, &BasisState::zeros(1), &MeasurementStrategy::AllBranches),
            Err(SimError::NonClassicalOutput { qubit: 0, .. })
        ));
    }
}
