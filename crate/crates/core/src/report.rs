//! Validation report: measured costs against the closed forms, the known
//! discrepancies, the savings table and one verdict per acceptance check.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::floor_log2;
use crate::builders::{adder_io, build, build_with, BuildOptions, DesignId, RoundBounds};
use crate::circuit::Qubit;
use crate::io::{from_json, parse_qasm3, to_json, to_qasm3};
use crate::lowering::{lower, lower_temporary_and, LoweringPolicy};
use crate::resources::{
    baselines, count, formula_qubits, formula_tcount, log_bound_check, percent_string, savings,
    savings_average, savings_average_with, Averaging, FormulaSource, LogBoundCheck, Work, Q,
};
use crate::revsim::{adder_input, check_pairs, exhaustive_check};
use crate::statevector::{
    gadget_unitary_check, simulate, Gadget, MeasurementStrategy, NORM_TOLERANCE,
};

/// Signed `measured − Table` qubit deltas, one line per design.
pub const GOLDEN_QUBIT_DELTAS: &str = include_str!("../golden/qubit_deltas.txt");
/// `to_qasm3(lower(build(out1, 2)))`.
pub const GOLDEN_OUT1_N2_QASM: &str = include_str!("../golden/out1_n2.qasm");

/// Largest width in the conformance table.
pub const MAX_WIDTH: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConformanceRow {
    pub design: DesignId,
    pub n: u64,
    pub measured_t: u64,
    pub per_step_t: u64,
    pub table_t: u64,
    pub measured_qubits: u64,
    pub table_qubits: u64,
    pub qubit_delta: i64,
    pub t_depth: u64,
    pub total_depth: u64,
    /// ASAP depth before lowering, logical gates as unit steps.
    pub logical_depth: u64,
}

/// Measured against formula costs for one design and width.
pub fn conformance_row(design: DesignId, n: u64) -> ConformanceRow {
    let logical = build(design, n).expect("n is in the formula domain");
    let lowered = lower(&logical, LoweringPolicy::default()).expect("built circuits lower");
    let r = count(&lowered);
    let table_qubits = formula_qubits(design, n).expect("n is in the formula domain");
    ConformanceRow {
        design,
        n,
        measured_t: r.t_count.expect("Clifford+T level"),
        per_step_t: formula_tcount(design, n, FormulaSource::PerStep).expect("domain"),
        table_t: formula_tcount(design, n, FormulaSource::Table).expect("domain"),
        measured_qubits: r.qubit_count,
        table_qubits,
        qubit_delta: r.qubit_count as i64 - table_qubits as i64,
        t_depth: r.t_depth.expect("Clifford+T level"),
        total_depth: r.total_depth,
        logical_depth: count(&logical).total_depth,
    }
}

/// All rows for `n` up to `max_n`, in design then width order.
pub fn conformance_table(max_n: u64) -> Vec<ConformanceRow> {
    let jobs: Vec<(DesignId, u64)> = DesignId::ALL
        .iter()
        .flat_map(|&d| (d.min_formula_width()..=max_n).map(move |n| (d, n)))
        .collect();
    jobs.par_iter()
        .map(|&(d, n)| conformance_row(d, n))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DiscrepancyId {
    #[serde(rename = "InFtQcla1-TableIV")]
    InFtQcla1TableIv,
    OutQubitOffByOne,
    Step13Bound,
    #[serde(rename = "Abstract35_87")]
    Abstract35_87,
    Fig2aTCount,
}

impl DiscrepancyId {
    pub const ALL: [DiscrepancyId; 5] = [
        DiscrepancyId::InFtQcla1TableIv,
        DiscrepancyId::OutQubitOffByOne,
        DiscrepancyId::Step13Bound,
        DiscrepancyId::Abstract35_87,
        DiscrepancyId::Fig2aTCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiscrepancyId::InFtQcla1TableIv => "InFtQcla1-TableIV",
            DiscrepancyId::OutQubitOffByOne => "OutQubitOffByOne",
            DiscrepancyId::Step13Bound => "Step13Bound",
            DiscrepancyId::Abstract35_87 => "Abstract35_87",
            DiscrepancyId::Fig2aTCount => "Fig2aTCount",
        }
    }
}

impl fmt::Display for DiscrepancyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Two printed claims that cannot both hold, with what the artifact measures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub id: DiscrepancyId,
    pub first: String,
    pub second: String,
    pub computed: String,
    /// The conflict showed up as expected.
    pub observed: bool,
}

fn in1_gap(n: u64) -> i64 {
    let l = floor_log2(n).expect("n >= 2") as i64;
    let l1 = floor_log2(n - 1).expect("n >= 2") as i64;
    8 * n as i64 - 4 * l - 4 * l1 - 12
}

fn discrepancy(id: DiscrepancyId, rows: &[ConformanceRow]) -> Discrepancy {
    let row = |d: DesignId, n: u64| rows.iter().find(|r| r.design == d && r.n == n);
    match id {
        DiscrepancyId::InFtQcla1TableIv => {
            let r = row(DesignId::InFtQcla1, 8)
                .cloned()
                .unwrap_or_else(|| conformance_row(DesignId::InFtQcla1, 8));
            let all = (2..=MAX_WIDTH).all(|n| {
                let t =
                    formula_tcount(DesignId::InFtQcla1, n, FormulaSource::Table).unwrap() as i64;
                let s =
                    formula_tcount(DesignId::InFtQcla1, n, FormulaSource::PerStep).unwrap() as i64;
                s - t == in1_gap(n)
            });
            Discrepancy {
                id,
                first: "summary table: 20n-8w(n)-8w(n-1)-4⌊log(n)⌋-4⌊log(n-1)⌋-8".into(),
                second: "per-step sum: 28n-8w(n)-8⌊log n⌋-8w(n-1)-8⌊log(n-1)⌋-20".into(),
                computed: format!(
                    "n=8: table {}, per-step {}, measured {}; gap 8n-4⌊log n⌋-4⌊log(n-1)⌋-12 for n=2..{MAX_WIDTH}: {}",
                    r.table_t,
                    r.per_step_t,
                    r.measured_t,
                    if all { "holds" } else { "broken" }
                ),
                observed: all && r.table_t != r.per_step_t && r.measured_t == r.per_step_t,
            }
        }
        DiscrepancyId::OutQubitOffByOne => {
            let n = 8u64;
            let table = formula_qubits(DesignId::OutFtQcla1, n).unwrap();
            let (w, l) = (n.count_ones() as u64, floor_log2(n).unwrap());
            let registers = 6 * n - 2 * w - 2 * l + 1;
            let measured = row(DesignId::OutFtQcla1, n)
                .map(|r| r.measured_qubits)
                .unwrap_or_else(|| conformance_row(DesignId::OutFtQcla1, n).measured_qubits);
            Discrepancy {
                id,
                first: "summary table: 6n-2w(n)-2⌊log(n)⌋".into(),
                second: "register sizing 2n + (n+1) + (3n-2w(n)-2⌊log n⌋)".into(),
                computed: format!(
                    "n=8: table {table}, register sum {registers}, measured {measured}"
                ),
                observed: registers == table + 1,
            }
        }
        DiscrepancyId::Step13Bound => {
            let n = 4u32;
            let printed = build_with(
                DesignId::InFtQcla1,
                n as u64,
                BuildOptions {
                    bounds: RoundBounds::Printed,
                },
            )
            .expect("builds");
            let side = 1u64 << n;
            let pairs: Vec<_> = (0..side)
                .flat_map(|a| (0..side).map(move |b| (a, b)))
                .collect();
            let strict =
                check_pairs(&printed, DesignId::InFtQcla1, &pairs).expect("io wires exist");
            let corrected = exhaustive_check(DesignId::InFtQcla1, n).expect("in bound");
            Discrepancy {
                id,
                first: "step 10 bound: m up to ⌊n/2^t⌋-1".into(),
                second: "step 13 bound: m up to ⌊(n-1)/2^t⌋-1".into(),
                computed: format!(
                    "reverse rounds at width n-1: {}/{} pairs pass at n={n}; literal bounds: {}/{} pass",
                    corrected.passed, corrected.total, strict.passed, strict.total
                ),
                observed: corrected.ok() && !strict.ok(),
            }
        }
        DiscrepancyId::Abstract35_87 => {
            let exact = savings_average(DesignId::InFtQcla2);
            let rounded = savings_average_with(DesignId::InFtQcla2, Averaging::MeanOfRounded);
            let distinct = savings_average_with(DesignId::InFtQcla2, Averaging::DistinctForms);
            let stated = Q::new(3587, 100);
            let near = |q: Q| {
                let d = q - stated;
                d <= Q::new(1, 100) && d >= Q::new(-1, 100)
            };
            Discrepancy {
                id,
                first: "stated In-FT-QCLA2 average: 35.87 %".into(),
                second:
                    "quoted per-baseline figures 79.59, 18.37, 52.38, 52.38, 42.86, 42.86, 21.18"
                        .into(),
                computed: format!(
                    "mean {}; mean of rounded {}; distinct forms {}",
                    percent_string(exact),
                    percent_string(rounded),
                    percent_string(distinct)
                ),
                observed: ![exact, rounded, distinct].into_iter().any(near),
            }
        }
        DiscrepancyId::Fig2aTCount => {
            let gadget =
                lower_temporary_and(Qubit(0), Qubit(1), Qubit(2)).expect("distinct operands");
            let t = gadget.iter().filter(|g| g.is_t_type()).count();
            Discrepancy {
                id,
                first: "AND gadget drawing: three T/T† symbols".into(),
                second: "stated AND gadget T-count: 4".into(),
                computed: format!("emitted AND gadget T-count {t} (magic-state T included)"),
                observed: t == 4,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SavingsRow {
    pub design: DesignId,
    pub baseline: String,
    pub computed: String,
    /// Published figure, if any.
    pub quoted: Option<&'static str>,
    pub matches: Option<bool>,
}

/// Published percentages for each design and baseline.
pub fn quoted_figure(design: DesignId, baseline: Work) -> Option<&'static str> {
    use DesignId::*;
    use Work::*;
    Some(match (design, baseline) {
        (OutFtQcla1, BabuOut) => "70.37",
        (OutFtQcla1, LisaOut) => "38.46",
        (OutFtQcla1, DraperOut | TrisetyarsoOut | ThapliyalOut) => "54.29",
        (OutFtQcla2, BabuOut) => "59.26",
        (OutFtQcla2, LisaOut) => "15.38",
        (OutFtQcla2, DraperOut | TrisetyarsoOut | ThapliyalOut) => "37.14",
        (InFtQcla1, Takahashi08) => "89.80",
        (InFtQcla1, Takahashi10) => "59.18",
        (InFtQcla1, Mogensen1 | Mogensen2) => "76.19",
        (InFtQcla1, DraperIn | TrisetyarsoIn) => "71.43",
        (InFtQcla1, ThapliyalIn) => "60.59",
        (InFtQcla2, Takahashi08) => "79.59",
        (InFtQcla2, Takahashi10) => "18.37",
        (InFtQcla2, Mogensen1 | Mogensen2) => "52.38",
        (InFtQcla2, DraperIn | TrisetyarsoIn) => "42.86",
        (InFtQcla2, ThapliyalIn) => "21.18",
        _ => return None,
    })
}

/// Published average savings.
pub fn quoted_average(design: DesignId) -> &'static str {
    match design {
        DesignId::OutFtQcla1 => "54.34",
        DesignId::OutFtQcla2 => "37.21",
        DesignId::InFtQcla1 => "72.11",
        DesignId::InFtQcla2 => "35.87",
    }
}

fn parse_percent(s: &str) -> Q {
    let (whole, frac) = s.split_once('.').unwrap_or((s, "0"));
    Q::new(
        whole.parse::<i128>().unwrap() * 100 + frac.parse::<i128>().unwrap(),
        100,
    )
}

fn within_cent(a: Q, b: Q) -> bool {
    let d = a - b;
    d <= Q::new(1, 100) && d >= Q::new(-1, 100)
}

/// One row per design and baseline, Cheng included.
pub fn savings_table() -> Vec<SavingsRow> {
    let mut rows = Vec::new();
    for d in DesignId::ALL {
        let mut works = baselines(d);
        if d.is_in_place() {
            works.push(Work::Cheng);
        }
        for w in works {
            let fig = savings(d, w);
            let quoted = quoted_figure(d, w);
            rows.push(SavingsRow {
                design: d,
                baseline: w.label().to_string(),
                computed: fig.rendered(),
                quoted,
                matches: quoted.map(|q| {
                    fig.percent()
                        .is_some_and(|p| within_cent(p, parse_percent(q)))
                }),
            });
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AverageRow {
    pub design: DesignId,
    pub computed: String,
    pub quoted: &'static str,
    pub matches: bool,
}

pub fn averages() -> Vec<AverageRow> {
    DesignId::ALL
        .iter()
        .map(|&d| {
            let avg = savings_average(d);
            let quoted = quoted_average(d);
            AverageRow {
                design: d,
                computed: percent_string(avg),
                quoted,
                matches: within_cent(avg, parse_percent(quoted)),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub full: bool,
    pub rows: Vec<ConformanceRow>,
    pub discrepancies: Vec<Discrepancy>,
    pub savings: Vec<SavingsRow>,
    pub averages: Vec<AverageRow>,
    pub depth: Vec<DepthProperty>,
    pub criteria: Vec<CriterionResult>,
}

impl ValidationReport {
    /// Every criterion passes; the ledgered discrepancies are expected and
    /// never count as failures.
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serialisable");
        s.push('\n');
        s
    }
}

fn timed(id: u8, title: &'static str, f: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (pass, detail) = f();
    CriterionResult {
        id,
        title,
        pass,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn criterion_tcount(rows: &[ConformanceRow]) -> (bool, String) {
    let step_bad: Vec<_> = rows
        .iter()
        .filter(|r| r.measured_t != r.per_step_t)
        .collect();
    let table_bad: Vec<_> = rows
        .iter()
        .filter(|r| r.design != DesignId::InFtQcla1 && r.measured_t != r.table_t)
        .collect();
    let spot: Vec<u64> = [
        DesignId::OutFtQcla1,
        DesignId::OutFtQcla2,
        DesignId::InFtQcla2,
    ]
    .iter()
    .filter_map(|&d| {
        rows.iter()
            .find(|r| r.design == d && r.n == 8)
            .map(|r| r.measured_t)
    })
    .collect();
    let pass = step_bad.is_empty() && table_bad.is_empty() && spot == [92, 125, 189];
    let mut detail = format!("{} rows; n=8 spot values {:?}", rows.len(), spot);
    if let Some(r) = step_bad.first().or(table_bad.first()) {
        let _ = write!(
            detail,
            "; first mismatch {} n={}: measured {}, per-step {}, table {}",
            r.design, r.n, r.measured_t, r.per_step_t, r.table_t
        );
    }
    (pass, detail)
}

pub fn criterion_in1_gap() -> (bool, String) {
    let bad: Vec<u64> = (2..=MAX_WIDTH)
        .filter(|&n| {
            let t = formula_tcount(DesignId::InFtQcla1, n, FormulaSource::Table).unwrap() as i64;
            let s = formula_tcount(DesignId::InFtQcla1, n, FormulaSource::PerStep).unwrap() as i64;
            s - t != in1_gap(n)
        })
        .collect();
    (
        bad.is_empty(),
        format!(
            "gap at n=8: {}; widths off the gap formula: {bad:?}",
            in1_gap(8)
        ),
    )
}

/// Parse `design delta` lines.
pub fn golden_qubit_deltas() -> BTreeMap<DesignId, i64> {
    GOLDEN_QUBIT_DELTAS
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (d, v) = l.split_once(' ').expect("`design delta` lines");
            (
                d.parse().expect("known design"),
                v.trim().parse().expect("integer delta"),
            )
        })
        .collect()
}

pub fn criterion_qubits(rows: &[ConformanceRow]) -> (bool, String) {
    let golden = golden_qubit_deltas();
    let mut pass = true;
    let mut parts = Vec::new();
    for d in DesignId::ALL {
        let deltas: Vec<i64> = rows
            .iter()
            .filter(|r| r.design == d)
            .map(|r| r.qubit_delta)
            .collect();
        let constant = deltas.windows(2).all(|w| w[0] == w[1]);
        let bounded = deltas.iter().all(|x| x.abs() <= 1);
        let matches = deltas.first() == golden.get(&d);
        pass &= constant && bounded && matches;
        parts.push(format!(
            "{} {:+}",
            d.short(),
            deltas.first().copied().unwrap_or(0)
        ));
    }
    let table: Vec<u64> = DesignId::ALL
        .iter()
        .map(|&d| formula_qubits(d, 8).unwrap())
        .collect();
    pass &= table == [40, 29, 40, 29];
    (
        pass,
        format!("deltas {}; table at n=8 {table:?}", parts.join(", ")),
    )
}

pub fn criterion_functional(max_n: u32) -> (bool, String) {
    let jobs: Vec<(DesignId, u32)> = DesignId::ALL
        .iter()
        .flat_map(|&d| (1..=max_n).map(move |n| (d, n)))
        .collect();
    let checks: Vec<_> = jobs
        .par_iter()
        .map(|&(d, n)| exhaustive_check(d, n))
        .collect();
    let mut total = 0;
    let mut failed = Vec::new();
    for (c, &(d, n)) in checks.iter().zip(&jobs) {
        match c {
            Ok(c) => {
                total += c.total;
                if !c.ok() {
                    failed.push(format!(
                        "{} n={n}: {} failures",
                        d.short(),
                        c.failures.len()
                    ));
                }
            }
            Err(e) => failed.push(format!("{} n={n}: {e}", d.short())),
        }
    }
    (
        failed.is_empty(),
        format!("{total} pairs over n=1..{max_n}; failing: {failed:?}"),
    )
}

/// Random pairs at wide widths, beyond the exhaustive range.
pub fn criterion_functional_wide(widths: &[u32], pairs: usize, seed: u64) -> (bool, String) {
    let mut failed = Vec::new();
    for d in DesignId::ALL {
        for &n in widths {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let list: Vec<_> = (0..pairs)
                .map(|_| (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask))
                .collect();
            let c = build(d, n as u64).expect("builds");
            let check = check_pairs(&c, d, &list).expect("io wires exist");
            if !check.ok() {
                failed.push(format!("{} n={n}", d.short()));
            }
        }
    }
    (
        failed.is_empty(),
        format!("{pairs} pairs at n={widths:?}; failing: {failed:?}"),
    )
}

pub fn criterion_gadgets() -> (bool, String) {
    let checks: Vec<_> = Gadget::ALL
        .iter()
        .map(|&g| gadget_unitary_check(g))
        .collect();
    let detail = checks
        .iter()
        .map(|c| {
            format!(
                "{:?} {} cases, max dev {:.1e}",
                c.gadget, c.cases, c.max_deviation
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    (checks.iter().all(|c| c.pass), detail)
}

pub fn criterion_statevector(widths: &[u64], inputs: usize, seed: u64) -> (bool, String) {
    let jobs: Vec<(DesignId, u64)> = DesignId::ALL
        .iter()
        .flat_map(|&d| widths.iter().map(move |&n| (d, n)))
        .collect();
    let results: Vec<Result<(usize, f64), String>> = jobs
        .par_iter()
        .map(|&(d, n)| {
            let logical = build(d, n).map_err(|e| e.to_string())?;
            let c = lower(&logical, LoweringPolicy::default()).map_err(|e| e.to_string())?;
            let io = adder_io(&c, d).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n << 8) ^ d as u64);
            let mut branches = 0;
            let mut worst: f64 = 0.0;
            for _ in 0..inputs {
                let (a, b) = (rng.gen_range(0..1u64 << n), rng.gen_range(0..1u64 << n));
                let outs = simulate(
                    &c,
                    &adder_input(&c, &io, a, b),
                    &MeasurementStrategy::AllBranches,
                )
                .map_err(|e| format!("{} n={n}: {e}", d.short()))?;
                let total: f64 = outs.iter().map(|o| o.probability).sum();
                worst = worst.max((total - 1.0).abs());
                for o in &outs {
                    if o.value(&io.sum) != Some((a + b) as u128) {
                        return Err(format!(
                            "{} n={n} a={a} b={b}: branch {:?} reads {:?}",
                            d.short(),
                            o.cbits,
                            o.value(&io.sum)
                        ));
                    }
                }
                branches += outs.len();
            }
            if worst > NORM_TOLERANCE {
                return Err(format!(
                    "{} n={n}: probabilities off by {worst:e}",
                    d.short()
                ));
            }
            Ok((branches, worst))
        })
        .collect();
    let errors: Vec<_> = results
        .iter()
        .filter_map(|r| r.as_ref().err().cloned())
        .collect();
    let branches: usize = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| r.0)
        .sum();
    (
        errors.is_empty(),
        format!(
            "{inputs} inputs per design at n={widths:?}, {branches} branches; errors: {errors:?}"
        ),
    )
}

pub fn criterion_savings(savings: &[SavingsRow], averages: &[AverageRow]) -> (bool, String) {
    let quoted: Vec<_> = savings.iter().filter(|r| r.quoted.is_some()).collect();
    let bad: Vec<_> = quoted.iter().filter(|r| r.matches != Some(true)).collect();
    let avg_bad: Vec<_> = averages
        .iter()
        .filter(|a| a.design != DesignId::InFtQcla2 && !a.matches)
        .collect();
    let in2 = averages
        .iter()
        .find(|a| a.design == DesignId::InFtQcla2)
        .expect("four designs");
    let mut detail = format!(
        "{} quoted figures, {} off; averages {}; In-FT-QCLA2 average {} (stated {}, unreproduced)",
        quoted.len(),
        bad.len(),
        averages
            .iter()
            .filter(|a| a.design != DesignId::InFtQcla2)
            .map(|a| a.computed.as_str())
            .collect::<Vec<_>>()
            .join(", "),
        in2.computed,
        in2.quoted,
    );
    for r in &bad {
        let _ = write!(
            detail,
            "; {} vs {}: {} != {}",
            r.design,
            r.baseline,
            r.computed,
            r.quoted.unwrap()
        );
    }
    (bad.is_empty() && avg_bad.is_empty(), detail)
}

/// Widths of the depth property.
pub fn depth_widths(max_n: u64) -> Vec<u64> {
    std::iter::successors(Some(4u64), |n| Some(n * 2))
        .take_while(|&n| n <= max_n)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthProperty {
    pub design: DesignId,
    pub logical: LogBoundCheck,
    pub t_depth: LogBoundCheck,
}

pub fn depth_properties(max_n: u64) -> Vec<DepthProperty> {
    let widths = depth_widths(max_n);
    DesignId::ALL
        .par_iter()
        .map(|&d| {
            let points: Vec<(u64, u64, u64)> = widths
                .par_iter()
                .map(|&n| {
                    let logical = build(d, n).expect("builds");
                    let lowered = lower(&logical, LoweringPolicy::default()).expect("lowers");
                    (
                        n,
                        count(&logical).total_depth,
                        count(&lowered).t_depth.expect("Clifford+T"),
                    )
                })
                .collect();
            DepthProperty {
                design: d,
                logical: log_bound_check(&points.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>()),
                t_depth: log_bound_check(&points.iter().map(|p| (p.0, p.2)).collect::<Vec<_>>()),
            }
        })
        .collect()
}

pub fn criterion_depth(props: &[DepthProperty]) -> (bool, String) {
    let describe = |name: &str, c: &LogBoundCheck| {
        if c.holds() {
            format!("{name} ok (α={}, β={})", c.alpha, c.beta)
        } else {
            format!(
                "{name} FAILS (α={}, β={}; over bound at {:?}, decreasing at {:?})",
                c.alpha, c.beta, c.exceeds_at, c.decreasing_at
            )
        }
    };
    let pass = props.iter().all(|p| p.logical.holds() && p.t_depth.holds());
    let detail = props
        .iter()
        .map(|p| {
            format!(
                "{}: {}, {}",
                p.design.short(),
                describe("logical", &p.logical),
                describe("T-depth", &p.t_depth)
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    (pass, detail)
}

pub fn criterion_round_trip() -> (bool, String) {
    let mut failed = Vec::new();
    for d in DesignId::ALL {
        for n in [1u64, 2, 4] {
            let logical = build(d, n).expect("builds");
            let lowered = lower(&logical, LoweringPolicy::default()).expect("lowers");
            let again =
                lower(&build(d, n).expect("builds"), LoweringPolicy::default()).expect("lowers");
            let qasm = to_qasm3(&lowered).expect("Clifford+T");
            let stable = qasm == to_qasm3(&again).expect("Clifford+T")
                && to_json(&lowered) == to_json(&again)
                && to_json(&logical) == to_json(&build(d, n).expect("builds"));
            let qasm_back = parse_qasm3(&qasm).is_ok_and(|c| {
                c.gates() == lowered.gates() && c.register_specs() == lowered.register_specs()
            });
            let json_back = [&logical, &lowered].iter().all(|c| {
                from_json(&to_json(c)).is_ok_and(|b| &b == *c && b.labels() == c.labels())
            });
            if !(stable && qasm_back && json_back) {
                failed.push(format!("{} n={n}", d.short()));
            }
        }
    }
    let golden = to_qasm3(
        &lower(
            &build(DesignId::OutFtQcla1, 2).unwrap(),
            LoweringPolicy::default(),
        )
        .unwrap(),
    )
    .unwrap();
    let golden_ok = golden == GOLDEN_OUT1_N2_QASM;
    (
        failed.is_empty() && golden_ok,
        format!(
            "QASM and JSON at n=1,2,4; failing: {failed:?}; out1 n=2 golden {}",
            if golden_ok { "byte-equal" } else { "differs" }
        ),
    )
}

/// Run every check. `full` adds random pairs at n = 16, 32, 64 and more
/// statevector inputs.
pub fn verify(full: bool) -> ValidationReport {
    let seed = crate::statevector::default_seed();
    let start = Instant::now();
    let rows = conformance_table(MAX_WIDTH);
    let table_ms = start.elapsed().as_millis();
    let savings = savings_table();
    let averages = averages();
    let depth_start = Instant::now();
    let depth = depth_properties(1024);
    let depth_ms = depth_start.elapsed().as_millis();

    let mut criteria = vec![
        {
            let mut c = timed(1, "T-count conformance", || criterion_tcount(&rows));
            c.millis += table_ms;
            c
        },
        timed(2, "In-FT-QCLA1 table/per-step gap", criterion_in1_gap),
        timed(3, "qubit conformance", || criterion_qubits(&rows)),
        timed(4, "functional correctness (exhaustive n<=6)", || {
            criterion_functional(6)
        }),
        timed(5, "gadget certification", criterion_gadgets),
        timed(6, "statevector determinism", || {
            criterion_statevector(&[2, 3], if full { 20 } else { 10 }, seed)
        }),
        timed(7, "savings reproduction", || {
            criterion_savings(&savings, &averages)
        }),
        {
            let mut c = timed(8, "O(log n) depth property", || criterion_depth(&depth));
            c.millis += depth_ms;
            c
        },
        timed(9, "round trip and determinism", criterion_round_trip),
    ];
    if full {
        criteria.push(timed(10, "functional correctness (random wide)", || {
            criterion_functional_wide(&[16, 32, 64], 1000, seed)
        }));
    }
    let discrepancies = DiscrepancyId::ALL
        .iter()
        .map(|&id| discrepancy(id, &rows))
        .collect();
    ValidationReport {
        full,
        rows,
        discrepancies,
        savings,
        averages,
        depth,
        criteria,
    }
}

/// Plain-text summary: verdicts, discrepancies, savings.
pub fn render_text(report: &ValidationReport) -> String {
    let mut out = String::new();
    for c in &report.criteria {
        let _ = writeln!(
            out,
            "[{}] {}. {} ({} ms): {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.millis,
            c.detail
        );
    }
    let _ = writeln!(out, "\nknown discrepancies:");
    for d in &report.discrepancies {
        let _ = writeln!(
            out,
            "  {} [{}]\n    {}\n    {}\n    computed: {}",
            d.id,
            if d.observed {
                "observed"
            } else {
                "NOT observed"
            },
            d.first,
            d.second,
            d.computed
        );
    }
    let _ = writeln!(out, "\nsavings:");
    for r in &report.savings {
        let _ = writeln!(
            out,
            "  {:<12} {:<16} {:>20}  quoted {}",
            r.design.short(),
            r.baseline,
            r.computed,
            r.quoted.unwrap_or("-")
        );
    }
    for a in &report.averages {
        let _ = writeln!(
            out,
            "  {:<12} average {}  quoted {}",
            a.design.short(),
            a.computed,
            a.quoted
        );
    }
    let _ = writeln!(
        out,
        "\n{}",
        if report.passed() {
            "verification passed"
        } else {
            "verification FAILED"
        }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_figures_all_match() {
        let rows = savings_table();
        assert_eq!(rows.iter().filter(|r| r.quoted.is_some()).count(), 24);
        assert!(rows.iter().all(|r| r.matches != Some(false)), "{rows:#?}");
        assert!(rows
            .iter()
            .any(|r| r.baseline == "Cheng" && r.computed == "asymptotic-dominance"));
    }

    #[test]
    fn averages_flag_only_in2() {
        let bad: Vec<_> = averages().into_iter().filter(|a| !a.matches).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].design, DesignId::InFtQcla2);
        assert_eq!(bad[0].computed, "44.23");
    }

    #[test]
    fn discrepancies_observed() {
        let rows: Vec<_> = [DesignId::OutFtQcla1, DesignId::InFtQcla1]
            .iter()
            .map(|&d| conformance_row(d, 8))
            .collect();
        for id in DiscrepancyId::ALL {
            let d = discrepancy(id, &rows);
            assert!(d.observed, "{d:?}");
        }
        let d = discrepancy(DiscrepancyId::InFtQcla1TableIv, &rows);
        assert!(
            d.computed.contains("table 100, per-step 132, measured 132"),
            "{}",
            d.computed
        );
    }

    #[test]
    fn golden_deltas_parse() {
        let g = golden_qubit_deltas();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn depth_widths_double() {
        assert_eq!(depth_widths(64), vec![4, 8, 16, 32, 64]);
    }

    #[test]
    fn parse_percent_exact() {
        assert_eq!(parse_percent("89.80"), Q::new(898, 10));
    }
}
