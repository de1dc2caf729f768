//! Circuit serialisation.

mod json;
mod qasm;

use serde::{Deserialize, Serialize};

pub use json::{from_json, to_json, JsonError, SCHEMA};
pub use qasm::{parse_qasm3, to_qasm3, QasmError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExportFormat {
    Qasm3,
    JsonIr,
}
