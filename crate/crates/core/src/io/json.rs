//! Versioned JSON form of a circuit at either level, including ancilla
//! inits and final wire labels.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    AncillaInit, Cbit, Circuit, CircuitError, Gate, GateKind, Level, Qubit, QubitRef, RegisterKind,
    RegisterSpec, WireLabel,
};

pub const SCHEMA: &str = "qcla-ir/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("unsupported schema `{0}` (expected {SCHEMA})")]
    Schema(String),
    #[error("gate {index}: {message}")]
    Gate { index: usize, message: String },
    #[error("{0}")]
    Labels(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Serde(#[from] serde_json::Error),
}

#[derive(Serialize, Deserialize)]
struct IrRegister {
    name: String,
    kind: RegisterKind,
    /// `null` entries for input qubits.
    inits: Vec<Option<AncillaInit>>,
}

#[derive(Serialize, Deserialize)]
struct IrGate {
    gate: String,
    qubits: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cbit: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct IrCircuit {
    schema: String,
    level: Level,
    registers: Vec<IrRegister>,
    num_cbits: usize,
    gates: Vec<IrGate>,
    /// Final wire label of each qubit, in qubit order.
    labels: Vec<String>,
}

/// Pretty-printed JSON; identical circuits give identical bytes.
pub fn to_json(circuit: &Circuit) -> String {
    let name = |q: Qubit| circuit.qubit_ref(q).to_string();
    let ir = IrCircuit {
        schema: SCHEMA.to_string(),
        level: circuit.level(),
        registers: circuit
            .register_specs()
            .into_iter()
            .map(|s| IrRegister {
                name: s.name,
                kind: s.kind,
                inits: s.inits,
            })
            .collect(),
        num_cbits: circuit.num_cbits(),
        gates: circuit
            .gates()
            .iter()
            .map(|g| IrGate {
                gate: g.kind().name().to_string(),
                qubits: g.qubits().as_slice().iter().map(|&q| name(q)).collect(),
                cbit: g.cbit().map(|c| c.0),
            })
            .collect(),
        labels: circuit
            .labels()
            .iter()
            .map(|(_, l)| l.to_string())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&ir).expect("IR is always serialisable");
    text.push('\n');
    text
}

fn parse_ref(text: &str) -> Option<QubitRef> {
    let (reg, rest) = text.split_once('[')?;
    let index = rest.strip_suffix(']')?.parse().ok()?;
    Some(QubitRef::new(reg, index))
}

pub fn from_json(text: &str) -> Result<Circuit, JsonError> {
    let ir: IrCircuit = serde_json::from_str(text)?;
    if ir.schema != SCHEMA {
        return Err(JsonError::Schema(ir.schema));
    }
    let specs: Vec<RegisterSpec> = ir
        .registers
        .into_iter()
        .map(|r| RegisterSpec {
            name: r.name,
            kind: r.kind,
            inits: r.inits,
        })
        .collect();
    let mut c = Circuit::with_level(&specs, ir.level)?;
    for (index, g) in ir.gates.iter().enumerate() {
        let bad = |message: String| JsonError::Gate { index, message };
        let kind = GateKind::from_name(&g.gate)
            .ok_or_else(|| bad(format!("unknown gate `{}`", g.gate)))?;
        let qubits = g
            .qubits
            .iter()
            .map(|s| {
                parse_ref(s)
                    .and_then(|r| c.resolve(&r))
                    .ok_or_else(|| bad(format!("unknown qubit `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let gate = Gate::from_parts(kind, &qubits, g.cbit.map(Cbit))
            .ok_or_else(|| bad(format!("operands do not fit `{}`", g.gate)))?;
        c.append(gate)?;
    }
    if c.num_cbits() != ir.num_cbits {
        return Err(JsonError::Labels(format!(
            "declared {} classical bits, gates use {}",
            ir.num_cbits,
            c.num_cbits()
        )));
    }
    if ir.labels.len() != c.num_qubits() {
        return Err(JsonError::Labels(format!(
            "{} labels for {} qubits",
            ir.labels.len(),
            c.num_qubits()
        )));
    }
    let labels = ir
        .labels
        .iter()
        .map(|l| l.parse::<WireLabel>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(JsonError::Labels)?;
    c.set_labels(labels)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build, DesignId};
    use crate::lowering::{lower, LoweringPolicy};

    #[test]
    fn round_trip_both_levels() {
        for d in DesignId::ALL {
            for n in [1, 2, 4] {
                let c = build(d, n).unwrap();
                for circuit in [lower(&c, LoweringPolicy::default()).unwrap(), c] {
                    let text = to_json(&circuit);
                    let back = from_json(&text).unwrap();
                    assert_eq!(back, circuit);
                    assert_eq!(back.labels(), circuit.labels());
                    assert_eq!(to_json(&back), text);
                }
            }
        }
    }

    #[test]
    fn keeps_inits_and_labels() {
        let c = build(DesignId::OutFtQcla1, 2).unwrap();
        let text = to_json(&c);
        assert!(text.contains("\"schema\": \"qcla-ir/1\""));
        assert!(text.contains("\"MagicA\""));
        assert!(text.contains("\"s_2\""));
    }

    #[test]
    fn rejects_bad_input() {
        let c = build(DesignId::OutFtQcla1, 1).unwrap();
        let text = to_json(&c);
        assert!(matches!(
            from_json(&text.replace("qcla-ir/1", "qcla-ir/9")),
            Err(JsonError::Schema(_))
        ));
        assert!(matches!(
            from_json(&text.replace("\"temporary_and\"", "\"rx\"")),
            Err(JsonError::Gate { index: 0, .. })
        ));
        assert!(from_json("{").is_err());
    }
}
