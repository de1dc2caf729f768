//! OpenQASM 3 export of Clifford+T circuits and a parser for exactly the
//! constructs the exporter writes.
//!
//! The register table survives the round trip through trailing comments on
//! the declarations (`// input`, `// ancilla z m`, `// scratch z z`), where
//! `z` is a zero ancilla and `m` a magic-state ancilla.

use std::fmt::Write;

use thiserror::Error;

use crate::circuit::{
    AncillaInit, Cbit, Circuit, CircuitError, Gate, Level, Qubit, RegisterKind, RegisterSpec,
};

const PREP_BEGIN: &str = "// magic-state preparation";
const PREP_END: &str = "// end magic-state preparation";
const CREG: &str = "c";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QasmError {
    #[error("only Clifford+T circuits can be exported to OpenQASM")]
    LevelMismatch,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported gate `{name}`")]
    UnknownGate { line: usize, name: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn init_code(init: Option<AncillaInit>) -> &'static str {
    match init {
        Some(AncillaInit::MagicA) => "m",
        _ => "z",
    }
}

/// Deterministic OpenQASM 3 text.
pub fn to_qasm3(circuit: &Circuit) -> Result<String, QasmError> {
    if circuit.level() != Level::CliffordTLevel {
        return Err(QasmError::LevelMismatch);
    }
    let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    for r in circuit.registers() {
        let mut note = match r.kind {
            RegisterKind::Input => "input".to_string(),
            RegisterKind::Ancilla => "ancilla".to_string(),
            RegisterKind::Scratch => "scratch".to_string(),
        };
        for &q in &r.qubits {
            if r.kind != RegisterKind::Input {
                note.push(' ');
                note.push_str(init_code(circuit.init(q)));
            }
        }
        if r.is_empty() {
            // zero-length arrays are not valid declarations
            writeln!(out, "// qubit[0] {}; // {note}", r.name).unwrap();
        } else {
            writeln!(out, "qubit[{}] {}; // {note}", r.len(), r.name).unwrap();
        }
    }
    if circuit.num_cbits() > 0 {
        writeln!(out, "bit[{}] {CREG};", circuit.num_cbits()).unwrap();
    }
    let name = |q: Qubit| circuit.qubit_ref(q).to_string();

    let magic: Vec<Qubit> = (0..circuit.num_qubits() as u32)
        .map(Qubit)
        .filter(|&q| circuit.init(q) == Some(AncillaInit::MagicA))
        .collect();
    if !magic.is_empty() {
        writeln!(out, "{PREP_BEGIN}").unwrap();
        for &q in &magic {
            writeln!(out, "h {};\nt {};", name(q), name(q)).unwrap();
        }
        writeln!(out, "{PREP_END}").unwrap();
    }

    for g in circuit.gates() {
        match *g {
            Gate::MeasureX { qubit, cbit } => writeln!(
                out,
                "h {};\n{CREG}[{}] = measure {};",
                name(qubit),
                cbit.0,
                name(qubit)
            )
            .unwrap(),
            Gate::ClassicallyControlledCz { cbit, a, b } => writeln!(
                out,
                "if ({CREG}[{}] == 1) {{ cz {}, {}; }}",
                cbit.0,
                name(a),
                name(b)
            )
            .unwrap(),
            _ => {
                let ops: Vec<String> = g.qubits().as_slice().iter().map(|&q| name(q)).collect();
                writeln!(out, "{} {};", qasm_name(g), ops.join(", ")).unwrap();
            }
        }
    }
    Ok(out)
}

fn qasm_name(g: &Gate) -> &'static str {
    match g {
        Gate::Not(_) => "x",
        Gate::Cnot { .. } => "cx",
        Gate::H(_) => "h",
        Gate::T(_) => "t",
        Gate::Tdg(_) => "tdg",
        Gate::S(_) => "s",
        Gate::Sdg(_) => "sdg",
        Gate::Z(_) => "z",
        Gate::Cz(..) => "cz",
        Gate::Reset(_) => "reset",
        _ => unreachable!("not a Clifford+T gate: {g:?}"),
    }
}

struct Parser {
    specs: Vec<RegisterSpec>,
    circuit: Option<Circuit>,
    line: usize,
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: self.line,
            message: message.into(),
        }
    }

    fn declare(&mut self, len: usize, name: &str, note: &str) -> Result<(), QasmError> {
        if self.circuit.is_some() {
            return Err(self.err("declaration after the first gate"));
        }
        let mut words = note.split_whitespace();
        let kind = match words.next() {
            Some("input") => RegisterKind::Input,
            Some("ancilla") => RegisterKind::Ancilla,
            Some("scratch") => RegisterKind::Scratch,
            _ => return Err(self.err(format!("register `{name}` lacks a kind annotation"))),
        };
        let inits: Vec<Option<AncillaInit>> = if kind == RegisterKind::Input {
            vec![None; len]
        } else {
            words
                .map(|w| match w {
                    "z" => Ok(Some(AncillaInit::Zero)),
                    "m" => Ok(Some(AncillaInit::MagicA)),
                    other => Err(self.err(format!("bad init code `{other}`"))),
                })
                .collect::<Result<_, _>>()?
        };
        if inits.len() != len {
            return Err(self.err(format!(
                "register `{name}` has {len} qubits but {} inits",
                inits.len()
            )));
        }
        self.specs.push(RegisterSpec {
            name: name.to_string(),
            kind,
            inits,
        });
        Ok(())
    }

    fn circuit(&mut self) -> Result<&mut Circuit, QasmError> {
        if self.circuit.is_none() {
            self.circuit = Some(Circuit::with_level(&self.specs, Level::CliffordTLevel)?);
        }
        Ok(self.circuit.as_mut().expect("just built"))
    }

    fn qubit(&mut self, text: &str) -> Result<Qubit, QasmError> {
        let text = text.trim();
        let (reg, rest) = text
            .split_once('[')
            .ok_or_else(|| self.err(format!("expected `name[index]`, got `{text}`")))?;
        let idx: usize = rest
            .strip_suffix(']')
            .and_then(|i| i.parse().ok())
            .ok_or_else(|| self.err(format!("bad index in `{text}`")))?;
        let c = self.circuit()?;
        c.register(reg)
            .and_then(|r| r.qubits.get(idx).copied())
            .ok_or_else(|| self.err(format!("unknown qubit `{text}`")))
    }

    fn cbit(&self, text: &str) -> Result<Cbit, QasmError> {
        text.trim()
            .strip_prefix(CREG)
            .and_then(|t| t.strip_prefix('['))
            .and_then(|t| t.strip_suffix(']'))
            .and_then(|t| t.parse().ok())
            .map(Cbit)
            .ok_or_else(|| self.err(format!("bad classical bit `{text}`")))
    }

    fn push(&mut self, g: Gate) -> Result<(), QasmError> {
        self.circuit()?.append(g)?;
        Ok(())
    }

    fn statement(&mut self, stmt: &str, pending_h: &mut Option<Qubit>) -> Result<(), QasmError> {
        // a measurement consumes the `h` written just before it
        let assignment = if stmt.starts_with("if") {
            None
        } else {
            stmt.split_once('=')
        };
        if let Some((lhs, rhs)) = assignment {
            let target = rhs
                .trim()
                .trim_end_matches(';')
                .strip_prefix("measure ")
                .ok_or_else(|| self.err("only `c[i] = measure q` assignments are supported"))?;
            let cbit = self.cbit(lhs)?;
            let qubit = self.qubit(target)?;
            if pending_h.take() != Some(qubit) {
                return Err(self.err("measurement must directly follow `h` on the same qubit"));
            }
            return self.push(Gate::MeasureX { qubit, cbit });
        }
        if let Some(h) = pending_h.take() {
            self.push(Gate::H(h))?;
        }
        if let Some(rest) = stmt.strip_prefix("if") {
            let rest = rest.trim();
            let (cond, body) = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| self.err("bad `if` condition"))?;
            let (bit, one) = cond
                .split_once("==")
                .ok_or_else(|| self.err("bad `if` condition"))?;
            if one.trim() != "1" {
                return Err(self.err("conditions must compare with 1"));
            }
            let cbit = self.cbit(bit)?;
            let inner = body
                .trim()
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .map(str::trim)
                .and_then(|b| b.strip_suffix(';'))
                .and_then(|b| b.strip_prefix("cz "))
                .ok_or_else(|| self.err("`if` body must be a single `cz`"))?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| self.err("cz needs two operands"))?;
            let (a, b) = (self.qubit(a)?, self.qubit(b)?);
            return self.push(Gate::ClassicallyControlledCz { cbit, a, b });
        }
        let stmt = stmt
            .strip_suffix(';')
            .ok_or_else(|| self.err("missing `;`"))?
            .trim();
        let (name, args) = stmt.split_once(' ').unwrap_or((stmt, ""));
        let ops = args
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|a| self.qubit(a))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |n: usize| {
            if ops.len() == n {
                Ok(())
            } else {
                Err(self.err(format!("`{name}` takes {n} operand(s)")))
            }
        };
        let g = match name {
            "h" => {
                arity(1)?;
                *pending_h = Some(ops[0]);
                return Ok(());
            }
            "x" => arity(1).map(|_| Gate::Not(ops[0]))?,
            "t" => arity(1).map(|_| Gate::T(ops[0]))?,
            "tdg" => arity(1).map(|_| Gate::Tdg(ops[0]))?,
            "s" => arity(1).map(|_| Gate::S(ops[0]))?,
            "sdg" => arity(1).map(|_| Gate::Sdg(ops[0]))?,
            "z" => arity(1).map(|_| Gate::Z(ops[0]))?,
            "reset" => arity(1).map(|_| Gate::Reset(ops[0]))?,
            "cx" => arity(2).map(|_| Gate::Cnot {
                control: ops[0],
                target: ops[1],
            })?,
            "cz" => arity(2).map(|_| Gate::Cz(ops[0], ops[1]))?,
            other => {
                let name = other.split('(').next().unwrap_or(other).to_string();
                return Err(QasmError::UnknownGate {
                    line: self.line,
                    name,
                });
            }
        };
        self.push(g)
    }
}

/// Parse text written by [`to_qasm3`].
pub fn parse_qasm3(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser {
        specs: Vec::new(),
        circuit: None,
        line: 0,
    };
    let mut pending_h = None;
    let mut in_prep = false;
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let raw = raw.trim();
        if raw == PREP_BEGIN {
            in_prep = true;
            continue;
        }
        if raw == PREP_END {
            in_prep = false;
            continue;
        }
        // the preparation is implied by the `m` init codes
        if in_prep {
            continue;
        }
        if let Some(rest) = raw.strip_prefix("// qubit[0] ") {
            let (name, note) = rest
                .split_once(';')
                .ok_or_else(|| p.err("bad empty register"))?;
            let note = note.trim().trim_start_matches("//");
            p.declare(0, name.trim(), note)?;
            continue;
        }
        let (code, comment) = match raw.split_once("//") {
            Some((c, m)) => (c.trim(), m.trim()),
            None => (raw, ""),
        };
        if code.is_empty() {
            continue;
        }
        if !saw_header {
            if code != "OPENQASM 3.0;" {
                return Err(p.err("expected `OPENQASM 3.0;` header"));
            }
            saw_header = true;
            continue;
        }
        if code.starts_with("include ") {
            continue;
        }
        if let Some(rest) = code.strip_prefix("qubit[") {
            let (len, name) = rest
                .split_once(']')
                .ok_or_else(|| p.err("bad qubit declaration"))?;
            let len: usize = len.parse().map_err(|_| p.err("bad register length"))?;
            let name = name.trim().trim_end_matches(';').trim();
            p.declare(len, name, comment)?;
            continue;
        }
        if code.starts_with("bit[") {
            continue;
        }
        p.statement(code, &mut pending_h)?;
    }
    if let Some(h) = pending_h {
        p.push(Gate::H(h))?;
    }
    if !saw_header {
        return Err(p.err("empty input"));
    }
    p.circuit()?;
    Ok(p.circuit.expect("built above"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build, DesignId};
    use crate::lowering::{lower, LoweringPolicy};

    fn lowered(d: DesignId, n: u64) -> Circuit {
        lower(&build(d, n).unwrap(), LoweringPolicy::default()).unwrap()
    }

    #[test]
    fn single_cnot() {
        let mut c =
            Circuit::with_level(&[RegisterSpec::input("q", 2)], Level::CliffordTLevel).unwrap();
        c.append(Gate::Cnot {
            control: Qubit(0),
            target: Qubit(1),
        })
        .unwrap();
        let text = to_qasm3(&c).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("cx ")).count(), 1);
        assert!(text.starts_with("OPENQASM 3.0;\n"));
    }

    #[test]
    fn uncompute_structure() {
        let mut c =
            Circuit::with_level(&[RegisterSpec::input("q", 3)], Level::CliffordTLevel).unwrap();
        c.append(Gate::MeasureX {
            qubit: Qubit(2),
            cbit: Cbit(0),
        })
        .unwrap();
        c.append(Gate::ClassicallyControlledCz {
            cbit: Cbit(0),
            a: Qubit(0),
            b: Qubit(1),
        })
        .unwrap();
        let text = to_qasm3(&c).unwrap();
        assert_eq!(text.matches("measure").count(), 1);
        assert_eq!(text.matches("if (").count(), 1);
        assert_eq!(parse_qasm3(&text).unwrap(), c);
    }

    #[test]
    fn round_trips() {
        for d in DesignId::ALL {
            for n in [1, 2, 4] {
                let c = lowered(d, n);
                let text = to_qasm3(&c).unwrap();
                let back = parse_qasm3(&text).unwrap();
                assert_eq!(back, c, "{d} n={n}");
                assert_eq!(to_qasm3(&back).unwrap(), text);
            }
        }
        let empty = Circuit::with_level(&[], Level::CliffordTLevel).unwrap();
        assert_eq!(parse_qasm3(&to_qasm3(&empty).unwrap()).unwrap(), empty);
    }

    #[test]
    fn h_before_measurement_survives() {
        let mut c =
            Circuit::with_level(&[RegisterSpec::input("q", 1)], Level::CliffordTLevel).unwrap();
        c.append(Gate::H(Qubit(0))).unwrap();
        c.append(Gate::MeasureX {
            qubit: Qubit(0),
            cbit: Cbit(0),
        })
        .unwrap();
        c.append(Gate::H(Qubit(0))).unwrap();
        assert_eq!(parse_qasm3(&to_qasm3(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn magic_prologue() {
        let mut c = Circuit::with_level(
            &[
                RegisterSpec::input("q", 1),
                RegisterSpec::ancilla("m", [AncillaInit::MagicA]),
            ],
            Level::CliffordTLevel,
        )
        .unwrap();
        c.append(Gate::Cnot {
            control: Qubit(1),
            target: Qubit(0),
        })
        .unwrap();
        let text = to_qasm3(&c).unwrap();
        assert!(text.contains("h m[0];\nt m[0];\n"));
        assert_eq!(parse_qasm3(&text).unwrap(), c);
    }

    #[test]
    fn errors() {
        let c = build(DesignId::OutFtQcla1, 1).unwrap();
        assert_eq!(to_qasm3(&c), Err(QasmError::LevelMismatch));
        let text = "OPENQASM 3.0;\nqubit[1] q; // input\nrx(0.5) q[0];\n";
        assert_eq!(
            parse_qasm3(text),
            Err(QasmError::UnknownGate {
                line: 3,
                name: "rx".into()
            })
        );
        assert!(matches!(
            parse_qasm3("qubit[1] q;"),
            Err(QasmError::Syntax { line: 1, .. })
        ));
    }
}
