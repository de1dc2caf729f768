//! Toffoli-level to Clifford+T rewriting.
//!
//! Each logical gate is replaced in place by a fixed gadget:
//!
//! * `Toffoli`: the 7-T network of Maslov (H, T ladder, H).
//! * `TemporaryAnd`: Gidney's 4-T AND. The ancilla is prepared inline as
//!   `T·H|0⟩`, after which the body uses three more T-type gates, so the
//!   ancilla is re-declared `Zero` in the lowered circuit and every T gate
//!   the gadget costs is visible in the gate list.
//! * `Uncompute`: X-basis measurement plus a classically controlled CZ on the
//!   controls. No T gates.

use thiserror::Error;

use crate::circuit::{
    AncillaInit, Cbit, Circuit, CircuitError, Gate, Level, Qubit, QubitRefDisplay,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ToffoliStyle {
    #[default]
    MaslovSevenT,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AndStyle {
    #[default]
    GidneyFourT,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UncomputeStyle {
    #[default]
    MeasureBased,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoweringPolicy {
    pub toffoli: ToffoliStyle,
    pub and: AndStyle,
    pub uncompute: UncomputeStyle,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoweringError {
    #[error("gadget operands must be distinct")]
    DuplicateOperand,
    #[error("circuit is already at Clifford+T level")]
    AlreadyLowered,
    #[error("AND target {0} is not a fresh magic-state ancilla")]
    AncillaNotFresh(QubitRefDisplay),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn distinct(a: Qubit, b: Qubit, c: Qubit) -> Result<(), LoweringError> {
    if a == b || a == c || b == c {
        Err(LoweringError::DuplicateOperand)
    } else {
        Ok(())
    }
}

/// Seven-T Toffoli, `target ^= c1 & c2`.
pub fn lower_toffoli(c1: Qubit, c2: Qubit, target: Qubit) -> Result<Vec<Gate>, LoweringError> {
    distinct(c1, c2, target)?;
    let cx = |control, target| Gate::Cnot { control, target };
    Ok(vec![
        Gate::H(target),
        Gate::T(c1),
        Gate::T(c2),
        Gate::T(target),
        cx(c2, c1),
        cx(target, c2),
        cx(c1, target),
        Gate::Tdg(c2),
        cx(c1, c2),
        Gate::Tdg(c1),
        Gate::Tdg(c2),
        Gate::T(target),
        cx(target, c2),
        cx(c1, target),
        cx(c2, c1),
        Gate::H(target),
    ])
}

/// Four-T temporary AND writing `c1 & c2` onto `ancilla`, which must start
/// in |0⟩. The first two gates prepare the magic state.
pub fn lower_temporary_and(
    c1: Qubit,
    c2: Qubit,
    ancilla: Qubit,
) -> Result<Vec<Gate>, LoweringError> {
    distinct(c1, c2, ancilla)?;
    let cx = |control, target| Gate::Cnot { control, target };
    Ok(vec![
        Gate::H(ancilla),
        Gate::T(ancilla),
        cx(c1, ancilla),
        cx(c2, ancilla),
        cx(ancilla, c1),
        cx(ancilla, c2),
        Gate::Tdg(c1),
        Gate::Tdg(c2),
        Gate::T(ancilla),
        cx(ancilla, c1),
        cx(ancilla, c2),
        Gate::H(ancilla),
        Gate::S(ancilla),
    ])
}

/// Measurement-based erase of `target = c1 & c2`; the outcome lands on
/// `cbit`.
pub fn lower_uncompute(
    c1: Qubit,
    c2: Qubit,
    target: Qubit,
    cbit: Cbit,
) -> Result<Vec<Gate>, LoweringError> {
    distinct(c1, c2, target)?;
    Ok(vec![
        Gate::MeasureX {
            qubit: target,
            cbit,
        },
        Gate::ClassicallyControlledCz { cbit, a: c1, b: c2 },
    ])
}

/// Rewrite a Toffoli-level circuit gate by gate. The register table, qubit
/// ids and wire labels carry over unchanged.
pub fn lower(circuit: &Circuit, policy: LoweringPolicy) -> Result<Circuit, LoweringError> {
    let LoweringPolicy {
        toffoli: ToffoliStyle::MaslovSevenT,
        and: AndStyle::GidneyFourT,
        uncompute: UncomputeStyle::MeasureBased,
    } = policy;
    if circuit.level() == Level::CliffordTLevel {
        return Err(LoweringError::AlreadyLowered);
    }
    let mut out = circuit.empty_like(Level::CliffordTLevel);
    for &gate in circuit.gates() {
        let seq = match gate {
            Gate::Toffoli { c1, c2, target } => lower_toffoli(c1, c2, target)?,
            Gate::TemporaryAnd { c1, c2, target } => {
                match out.init(target) {
                    Some(AncillaInit::MagicA) => out.set_init(target, AncillaInit::Zero),
                    // a reused ancilla was already re-declared at its first AND
                    Some(AncillaInit::Zero) => {}
                    None => {
                        return Err(LoweringError::AncillaNotFresh(QubitRefDisplay(
                            circuit.qubit_ref(target).to_string(),
                        )))
                    }
                }
                lower_temporary_and(c1, c2, target)?
            }
            Gate::Uncompute { c1, c2, target } => lower_uncompute(c1, c2, target, out.next_cbit())?,
            other => vec![other],
        };
        for g in seq {
            out.append(g)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateKind, RegisterSpec};

    fn t_count(gates: &[Gate]) -> usize {
        gates.iter().filter(|g| g.is_t_type()).count()
    }

    fn three() -> Circuit {
        Circuit::new(&[
            RegisterSpec::input("q", 2),
            RegisterSpec::ancilla("a", [AncillaInit::MagicA, AncillaInit::Zero]),
        ])
        .unwrap()
    }

    #[test]
    fn gadget_t_counts() {
        let (a, b, c) = (Qubit(0), Qubit(1), Qubit(2));
        assert_eq!(t_count(&lower_toffoli(a, b, c).unwrap()), 7);
        assert_eq!(t_count(&lower_temporary_and(a, b, c).unwrap()), 4);
        assert_eq!(t_count(&lower_uncompute(a, b, c, Cbit(0)).unwrap()), 0);
    }

    #[test]
    fn gadgets_reject_duplicates() {
        let (a, b) = (Qubit(0), Qubit(1));
        assert_eq!(lower_toffoli(a, a, b), Err(LoweringError::DuplicateOperand));
        assert_eq!(
            lower_temporary_and(a, b, b),
            Err(LoweringError::DuplicateOperand)
        );
        assert_eq!(
            lower_uncompute(a, b, a, Cbit(0)),
            Err(LoweringError::DuplicateOperand)
        );
    }

    #[test]
    fn empty_circuit() {
        let c = Circuit::new(&[]).unwrap();
        let l = lower(&c, LoweringPolicy::default()).unwrap();
        assert!(l.gates().is_empty());
        assert_eq!(l.level(), Level::CliffordTLevel);
        assert_eq!(l.num_qubits(), 0);
    }

    #[test]
    fn mixed_circuit_counts() {
        let mut c = three();
        let (x, y, m, z) = (Qubit(0), Qubit(1), Qubit(2), Qubit(3));
        c.append(Gate::Toffoli {
            c1: x,
            c2: y,
            target: z,
        })
        .unwrap();
        c.append(Gate::TemporaryAnd {
            c1: x,
            c2: y,
            target: m,
        })
        .unwrap();
        c.append(Gate::Uncompute {
            c1: x,
            c2: y,
            target: m,
        })
        .unwrap();
        c.append(Gate::Cnot {
            control: x,
            target: y,
        })
        .unwrap();
        let l = lower(&c, LoweringPolicy::default()).unwrap();
        assert_eq!(t_count(l.gates()), 11);
        assert_eq!(l.num_cbits(), 1);
        assert_eq!(l.num_qubits(), c.num_qubits());
        assert_eq!(l.init(m), Some(AncillaInit::Zero));
        assert_eq!(
            l.gates().last(),
            Some(&Gate::Cnot {
                control: x,
                target: y
            })
        );
        assert_eq!(
            l.gates()
                .iter()
                .filter(|g| g.kind() == GateKind::MeasureX)
                .count(),
            1
        );
    }

    #[test]
    fn cbits_follow_measurement_order() {
        let mut c = Circuit::new(&[
            RegisterSpec::input("q", 2),
            RegisterSpec::ancilla("a", [AncillaInit::MagicA; 2]),
        ])
        .unwrap();
        let (x, y) = (Qubit(0), Qubit(1));
        for t in [Qubit(2), Qubit(3)] {
            c.append(Gate::TemporaryAnd {
                c1: x,
                c2: y,
                target: t,
            })
            .unwrap();
        }
        for t in [Qubit(3), Qubit(2)] {
            c.append(Gate::Uncompute {
                c1: x,
                c2: y,
                target: t,
            })
            .unwrap();
        }
        let l = lower(&c, LoweringPolicy::default()).unwrap();
        let cbits: Vec<_> = l
            .gates()
            .iter()
            .filter_map(|g| match g {
                Gate::MeasureX { qubit, cbit } => Some((qubit.0, cbit.0)),
                _ => None,
            })
            .collect();
        assert_eq!(cbits, vec![(3, 0), (2, 1)]);
    }

    #[test]
    fn rejects_lowered_input() {
        let c = Circuit::with_level(&[], Level::CliffordTLevel).unwrap();
        assert_eq!(
            lower(&c, LoweringPolicy::default()),
            Err(LoweringError::AlreadyLowered)
        );
    }
}
