//! Measured resources of a circuit and the closed-form cost models they are
//! compared against.

mod catalog;
mod formulas;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::circuit::{Circuit, Gate, GateKind, Level};

pub use catalog::{
    baselines, catalog, catalog_cost, design_model, percent_string, round_percent, savings,
    savings_at, savings_average, savings_average_with, Averaging, CatalogCost, CatalogError,
    CostForm, CostModel, SavingsFigure, SavingsResult, Term, Work, Q,
};
pub use formulas::{
    formula_qubits, formula_tcount, per_step, FormulaError, FormulaSource, StepCost,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub level: Level,
    /// `None` for Toffoli-level circuits, whose T cost depends on lowering.
    pub t_count: Option<u64>,
    pub t_depth: Option<u64>,
    /// ASAP depth. For Toffoli-level circuits every logical gate is one unit.
    pub total_depth: u64,
    pub qubit_count: u64,
    pub cnot_count: u64,
    pub measurement_count: u64,
    /// Gate count per kind, keyed by kind name. Kinds that never occur are
    /// omitted.
    pub histogram: BTreeMap<String, u64>,
}

impl ResourceReport {
    pub fn gates_of(&self, kind: GateKind) -> u64 {
        self.histogram.get(kind.name()).copied().unwrap_or(0)
    }
}

/// Single pass over the gate list plus an ASAP schedule.
pub fn count(circuit: &Circuit) -> ResourceReport {
    let mut histogram = BTreeMap::new();
    for g in circuit.gates() {
        *histogram.entry(g.kind().name().to_string()).or_insert(0) += 1;
    }
    let get = |k: GateKind| histogram.get(k.name()).copied().unwrap_or(0u64);
    let sched = schedule(circuit);
    let clifford_t = circuit.level() == Level::CliffordTLevel;
    ResourceReport {
        level: circuit.level(),
        t_count: clifford_t.then(|| get(GateKind::T) + get(GateKind::Tdg)),
        t_depth: clifford_t.then_some(sched.t_depth),
        total_depth: sched.total_depth,
        qubit_count: circuit.num_qubits() as u64,
        cnot_count: get(GateKind::Cnot),
        measurement_count: get(GateKind::MeasureX),
        histogram,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub total_depth: u64,
    /// Number of layers holding at least one T or T†.
    pub t_depth: u64,
}

/// ASAP layering. A gate sits one layer after the latest gate that shares a
/// qubit with it or that wrote a classical bit it reads.
pub fn schedule(circuit: &Circuit) -> Schedule {
    let mut qubit_layer = vec![0u64; circuit.num_qubits()];
    let mut cbit_layer = vec![0u64; circuit.num_cbits()];
    let mut t_layers = BTreeSet::new();
    let mut depth = 0;
    for g in circuit.gates() {
        let ops = g.qubits();
        let mut layer = ops
            .as_slice()
            .iter()
            .map(|q| qubit_layer[q.index()])
            .max()
            .unwrap_or(0);
        if let Some(c) = g.cbit() {
            layer = layer.max(cbit_layer[c.index()]);
        }
        layer += 1;
        for q in &ops {
            qubit_layer[q.index()] = layer;
        }
        if let Gate::MeasureX { cbit, .. } = g {
            cbit_layer[cbit.index()] = layer;
        }
        if g.is_t_type() {
            t_layers.insert(layer);
        }
        depth = depth.max(layer);
    }
    Schedule {
        total_depth: depth,
        t_depth: t_layers.len() as u64,
    }
}

/// `depth ≤ α·⌊log₂n⌋ + β` with α, β taken from the two smallest widths,
/// plus monotonicity, over a doubling sequence of widths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogBoundCheck {
    pub alpha: i64,
    pub beta: i64,
    pub points: Vec<(u64, u64)>,
    /// Widths whose depth is below the previous width's.
    pub decreasing_at: Vec<u64>,
    /// Widths whose depth exceeds the fitted bound.
    pub exceeds_at: Vec<u64>,
}

impl LogBoundCheck {
    pub fn holds(&self) -> bool {
        self.decreasing_at.is_empty() && self.exceeds_at.is_empty()
    }

    pub fn bound(&self, n: u64) -> i64 {
        let l = crate::arith::floor_log2(n).unwrap_or(0) as i64;
        self.alpha * l + self.beta
    }
}

/// `points` must start with two widths one doubling apart.
pub fn log_bound_check(points: &[(u64, u64)]) -> LogBoundCheck {
    assert!(points.len() >= 2, "need two points to fit");
    let log = |n: u64| crate::arith::floor_log2(n).expect("width >= 1") as i64;
    let ((n0, d0), (n1, d1)) = (points[0], points[1]);
    assert_eq!(
        log(n1),
        log(n0) + 1,
        "fit points must be one doubling apart"
    );
    let alpha = d1 as i64 - d0 as i64;
    let beta = d0 as i64 - alpha * log(n0);
    let mut check = LogBoundCheck {
        alpha,
        beta,
        points: points.to_vec(),
        decreasing_at: Vec::new(),
        exceeds_at: Vec::new(),
    };
    for w in points.windows(2) {
        if w[1].1 < w[0].1 {
            check.decreasing_at.push(w[1].0);
        }
    }
    for &(n, d) in points {
        if d as i64 > check.bound(n) {
            check.exceeds_at.push(n);
        }
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{AncillaInit, Cbit, Qubit, RegisterSpec};
    use crate::lowering::{lower_temporary_and, lower_toffoli, lower_uncompute};

    fn clifford(n: usize) -> Circuit {
        Circuit::with_level(&[RegisterSpec::input("q", n)], Level::CliffordTLevel).unwrap()
    }

    fn with(gates: Vec<Gate>, n: usize) -> Circuit {
        let mut c = clifford(n);
        for g in gates {
            c.append(g).unwrap();
        }
        c
    }

    #[test]
    fn schedule_examples() {
        let q = |i| Qubit(i);
        let c = with(
            vec![
                Gate::Cnot {
                    control: q(0),
                    target: q(1),
                },
                Gate::Cnot {
                    control: q(2),
                    target: q(3),
                },
            ],
            4,
        );
        assert_eq!(schedule(&c).total_depth, 1);
        assert_eq!(
            schedule(&with(vec![Gate::T(q(0)), Gate::T(q(0))], 1)).t_depth,
            2
        );
        assert_eq!(
            schedule(&with(vec![Gate::T(q(0)), Gate::T(q(1))], 2)).t_depth,
            1
        );
    }

    #[test]
    fn classical_dependency_orders_layers() {
        let q = |i| Qubit(i);
        // the conditional CZ shares no qubit with the measurement but must
        // still come after it
        let c = with(
            vec![
                Gate::H(q(0)),
                Gate::H(q(0)),
                Gate::MeasureX {
                    qubit: q(0),
                    cbit: Cbit(0),
                },
                Gate::ClassicallyControlledCz {
                    cbit: Cbit(0),
                    a: q(1),
                    b: q(2),
                },
            ],
            3,
        );
        assert_eq!(schedule(&c).total_depth, 4);
    }

    #[test]
    fn gadget_reports() {
        let (a, b, t) = (Qubit(0), Qubit(1), Qubit(2));
        let r = count(&with(lower_toffoli(a, b, t).unwrap(), 3));
        assert_eq!((r.t_count, r.qubit_count), (Some(7), 3));
        let r = count(&with(lower_temporary_and(a, b, t).unwrap(), 3));
        assert_eq!((r.t_count, r.measurement_count), (Some(4), 0));
        let r = count(&with(lower_uncompute(a, b, t, Cbit(0)).unwrap(), 3));
        assert_eq!((r.t_count, r.measurement_count), (Some(0), 1));
        assert!(r.t_depth.unwrap() <= r.t_count.unwrap());
    }

    #[test]
    fn toffoli_level_has_no_t_count() {
        let mut c = Circuit::new(&[
            RegisterSpec::input("q", 2),
            RegisterSpec::ancilla("z", [AncillaInit::MagicA]),
        ])
        .unwrap();
        c.append(Gate::TemporaryAnd {
            c1: Qubit(0),
            c2: Qubit(1),
            target: Qubit(2),
        })
        .unwrap();
        let r = count(&c);
        assert_eq!(r.t_count, None);
        assert_eq!(r.gates_of(GateKind::TemporaryAnd), 1);
        assert_eq!(r.total_depth, 1);
    }

    #[test]
    fn log_bound_fit() {
        let ok = log_bound_check(&[(4, 10), (8, 13), (16, 16), (32, 18)]);
        assert_eq!((ok.alpha, ok.beta), (3, 4));
        assert!(ok.holds());
        let bad = log_bound_check(&[(4, 10), (8, 13), (16, 20), (32, 19)]);
        assert_eq!(bad.exceeds_at, vec![16]);
        assert_eq!(bad.decreasing_at, vec![32]);
        assert!(!bad.holds());
    }
}
