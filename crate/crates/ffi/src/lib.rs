//! C ABI over `qcla-core`.
//!
//! Circuits are opaque handles owned by the caller and released with
//! [`qcla_circuit_free`]. Every function returns a [`QclaStatus`]; results
//! go through out-pointers. Panics never cross the boundary.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcla_core::builders::{adder_io, build, DesignId};
use qcla_core::circuit::{Circuit, Level};
use qcla_core::io::{to_json, to_qasm3};
use qcla_core::lowering::{lower, LoweringPolicy};
use qcla_core::resources::{count, formula_tcount, FormulaSource};
use qcla_core::revsim::{adder_input, run_basis};
use qcla_core::statevector::{simulate, MeasurementStrategy};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QclaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    WrongLevel = 3,
    SimulationFailed = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QclaDesign {
    Out1 = 0,
    Out2 = 1,
    In1 = 2,
    In2 = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QclaFormat {
    Qasm3 = 0,
    Json = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QclaFormulaSource {
    Table = 0,
    PerStep = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QclaResources {
    /// Zero for Toffoli-level circuits; see `clifford_t`.
    pub t_count: u64,
    pub t_depth: u64,
    pub total_depth: u64,
    pub qubit_count: u64,
    pub cnot_count: u64,
    pub measurement_count: u64,
    pub clifford_t: bool,
}

/// A sum of up to 65 bits: `low + 2^64 · high`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QclaSum {
    pub low: u64,
    pub high: u64,
}

/// Opaque circuit handle.
pub struct QclaCircuit {
    circuit: Circuit,
    design: DesignId,
}

impl From<QclaDesign> for DesignId {
    fn from(d: QclaDesign) -> Self {
        match d {
            QclaDesign::Out1 => DesignId::OutFtQcla1,
            QclaDesign::Out2 => DesignId::OutFtQcla2,
            QclaDesign::In1 => DesignId::InFtQcla1,
            QclaDesign::In2 => DesignId::InFtQcla2,
        }
    }
}

fn guard(f: impl FnOnce() -> QclaStatus) -> QclaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(QclaStatus::Panic)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qcla_status_message(status: QclaStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QclaStatus::Ok => c"ok",
        QclaStatus::NullPointer => c"null pointer argument",
        QclaStatus::InvalidArgument => c"invalid argument",
        QclaStatus::WrongLevel => c"operation needs a circuit at the other level",
        QclaStatus::SimulationFailed => c"simulation failed or produced a wrong sum",
        QclaStatus::BufferTooSmall => c"buffer too small",
        QclaStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// Build a Toffoli-level adder of width `n` into `*out`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn qcla_build(
    design: QclaDesign,
    n: u64,
    out: *mut *mut QclaCircuit,
) -> QclaStatus {
    guard(|| {
        if out.is_null() {
            return QclaStatus::NullPointer;
        }
        let design = DesignId::from(design);
        match build(design, n) {
            Ok(circuit) => {
                *out = Box::into_raw(Box::new(QclaCircuit { circuit, design }));
                QclaStatus::Ok
            }
            Err(_) => QclaStatus::InvalidArgument,
        }
    })
}

/// Lower a Toffoli-level circuit to Clifford+T as a new handle.
///
/// # Safety
/// `circuit` must be a live handle and `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn qcla_lower(
    circuit: *const QclaCircuit,
    out: *mut *mut QclaCircuit,
) -> QclaStatus {
    guard(|| {
        let (Some(c), false) = (circuit.as_ref(), out.is_null()) else {
            return QclaStatus::NullPointer;
        };
        if c.circuit.level() != Level::ToffoliLevel {
            return QclaStatus::WrongLevel;
        }
        match lower(&c.circuit, LoweringPolicy::default()) {
            Ok(circuit) => {
                *out = Box::into_raw(Box::new(QclaCircuit {
                    circuit,
                    design: c.design,
                }));
                QclaStatus::Ok
            }
            Err(_) => QclaStatus::InvalidArgument,
        }
    })
}

/// Measured resources of a circuit.
///
/// # Safety
/// `circuit` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qcla_count(
    circuit: *const QclaCircuit,
    out: *mut QclaResources,
) -> QclaStatus {
    guard(|| {
        let (Some(c), Some(out)) = (circuit.as_ref(), out.as_mut()) else {
            return QclaStatus::NullPointer;
        };
        let r = count(&c.circuit);
        *out = QclaResources {
            t_count: r.t_count.unwrap_or(0),
            t_depth: r.t_depth.unwrap_or(0),
            total_depth: r.total_depth,
            qubit_count: r.qubit_count,
            cnot_count: r.cnot_count,
            measurement_count: r.measurement_count,
            clifford_t: r.t_count.is_some(),
        };
        QclaStatus::Ok
    })
}

/// Add `a + b` on the circuit. Toffoli-level circuits run on the reversible
/// simulator; Clifford+T circuits on the statevector simulator with
/// measurement outcomes drawn from `seed`. A wrong sum is an error.
///
/// # Safety
/// `circuit` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qcla_simulate(
    circuit: *const QclaCircuit,
    a: u64,
    b: u64,
    seed: u64,
    out: *mut QclaSum,
) -> QclaStatus {
    guard(|| {
        let (Some(c), Some(out)) = (circuit.as_ref(), out.as_mut()) else {
            return QclaStatus::NullPointer;
        };
        let Ok(io) = adder_io(&c.circuit, c.design) else {
            return QclaStatus::InvalidArgument;
        };
        if io.n < 64 && (a >> io.n != 0 || b >> io.n != 0) {
            return QclaStatus::InvalidArgument;
        }
        let input = adder_input(&c.circuit, &io, a, b);
        let sum = match c.circuit.level() {
            Level::ToffoliLevel => match run_basis(&c.circuit, input) {
                Ok(s) => Some(s.read(&io.sum)),
                Err(_) => None,
            },
            Level::CliffordTLevel => {
                match simulate(&c.circuit, &input, &MeasurementStrategy::SeededRandom(seed)) {
                    Ok(outs) => outs.first().and_then(|o| o.value(&io.sum)),
                    Err(_) => None,
                }
            }
        };
        match sum {
            Some(s) if s == a as u128 + b as u128 => {
                *out = QclaSum {
                    low: s as u64,
                    high: (s >> 64) as u64,
                };
                QclaStatus::Ok
            }
            _ => QclaStatus::SimulationFailed,
        }
    })
}

/// Serialise into `buf` as a NUL-terminated string. `*written` receives the
/// byte count including the terminator, also when the buffer is too small,
/// so a call with `cap = 0` queries the size.
///
/// # Safety
/// `circuit` must be a live handle, `written` valid for one write and `buf`
/// valid for `cap` bytes (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn qcla_export(
    circuit: *const QclaCircuit,
    format: QclaFormat,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> QclaStatus {
    guard(|| {
        let (Some(c), Some(written)) = (circuit.as_ref(), written.as_mut()) else {
            return QclaStatus::NullPointer;
        };
        let text = match format {
            QclaFormat::Json => to_json(&c.circuit),
            QclaFormat::Qasm3 => match to_qasm3(&c.circuit) {
                Ok(t) => t,
                Err(_) => return QclaStatus::WrongLevel,
            },
        };
        *written = text.len() + 1;
        if cap < text.len() + 1 {
            return QclaStatus::BufferTooSmall;
        }
        if buf.is_null() {
            return QclaStatus::NullPointer;
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        QclaStatus::Ok
    })
}

/// Closed-form T-count.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qcla_formula_tcount(
    design: QclaDesign,
    n: u64,
    source: QclaFormulaSource,
    out: *mut u64,
) -> QclaStatus {
    guard(|| {
        let Some(out) = out.as_mut() else {
            return QclaStatus::NullPointer;
        };
        let source = match source {
            QclaFormulaSource::Table => FormulaSource::Table,
            QclaFormulaSource::PerStep => FormulaSource::PerStep,
        };
        match formula_tcount(design.into(), n, source) {
            Ok(t) => {
                *out = t;
                QclaStatus::Ok
            }
            Err(_) => QclaStatus::InvalidArgument,
        }
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `circuit` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qcla_circuit_free(circuit: *mut QclaCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}
