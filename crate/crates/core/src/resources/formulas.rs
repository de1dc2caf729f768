//! Closed-form T-count and qubit cost of the four designs.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{floor_log2, hamming_weight};
use crate::builders::DesignId;

/// Which printed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FormulaSource {
    /// The summary tables' closed forms.
    Table,
    /// The sum of the step-by-step cost lists.
    PerStep,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("{design} cost formulas need n >= {min}, got {n}")]
    Domain { design: DesignId, n: u64, min: u64 },
}

/// T cost of one step: `gates` gadgets at `t_per_gate` each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCost {
    pub step: u32,
    pub gates: i64,
    pub t_per_gate: i64,
}

struct Vars {
    n: i64,
    w: i64,
    l: i64,
    // w(n-1), ⌊log₂(n-1)⌋; zero when unused
    w1: i64,
    l1: i64,
}

fn vars(design: DesignId, n: u64) -> Result<Vars, FormulaError> {
    let min = design.min_formula_width();
    if n < min {
        return Err(FormulaError::Domain { design, n, min });
    }
    let (w1, l1) = if n >= 2 {
        (
            hamming_weight(n - 1) as i64,
            floor_log2(n - 1).expect("n - 1 >= 1") as i64,
        )
    } else {
        (0, 0)
    };
    Ok(Vars {
        n: n as i64,
        w: hamming_weight(n) as i64,
        l: floor_log2(n).expect("n >= 1") as i64,
        w1,
        l1,
    })
}

/// Per-step T costs of the T-consuming steps.
pub fn per_step(design: DesignId, n: u64) -> Result<Vec<StepCost>, FormulaError> {
    let Vars { n, w, l, w1, l1 } = vars(design, n)?;
    let pair = if design.uses_and_pairs() { 4 } else { 7 };
    let step = |step, gates, t_per_gate| StepCost {
        step,
        gates,
        t_per_gate,
    };
    let mut steps = vec![
        step(1, n, 4),
        step(3, n - w - l, 4),
        step(4, n - w, pair),
        step(5, n - l - 1, pair),
    ];
    if design.is_in_place() {
        steps.extend([
            step(10, n - 1 - w1 - l1, 4),
            step(11, n - l1 - 2, pair),
            step(12, n - 1 - w1, pair),
        ]);
    }
    Ok(steps)
}

pub fn formula_tcount(
    design: DesignId,
    n: u64,
    source: FormulaSource,
) -> Result<u64, FormulaError> {
    let total = match source {
        FormulaSource::PerStep => per_step(design, n)?
            .iter()
            .map(|s| s.gates * s.t_per_gate)
            .sum::<i64>(),
        FormulaSource::Table => {
            let Vars { n, w, l, w1, l1 } = vars(design, n)?;
            match design {
                DesignId::OutFtQcla1 => 16 * n - 8 * w - 8 * l - 4,
                DesignId::OutFtQcla2 => 22 * n - 11 * w - 11 * l - 7,
                DesignId::InFtQcla1 => 20 * n - 8 * w - 8 * w1 - 4 * l - 4 * l1 - 8,
                DesignId::InFtQcla2 => 40 * n - 11 * w - 11 * l - 11 * w1 - 11 * l1 - 32,
            }
        }
    };
    Ok(total as u64)
}

/// Qubit cost from the summary tables.
pub fn formula_qubits(design: DesignId, n: u64) -> Result<u64, FormulaError> {
    let Vars { n, w, l, .. } = vars(design, n)?;
    let q = if design.uses_and_pairs() {
        6 * n - 2 * w - 2 * l
    } else {
        4 * n - w - l + 1
    };
    Ok(q as u64)
}
