use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcla_core::builders::{adder_io, build, DesignId};
use qcla_core::circuit::Circuit;
use qcla_core::io::{to_json, to_qasm3};
use qcla_core::lowering::{lower, LoweringPolicy};
use qcla_core::report::{quoted_average, render_text, verify};
use qcla_core::resources::{
    baselines, catalog_cost, count, design_model, formula_qubits, formula_tcount, percent_string,
    savings, savings_average, FormulaSource, ResourceReport, Work, Q,
};
use qcla_core::revsim::{adder_input, run_basis};
use qcla_core::statevector::{default_seed, simulate, MeasurementStrategy};

#[derive(Parser)]
#[command(
    name = "qcla",
    version,
    about = "Fault-tolerant quantum carry-lookahead adders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one adder circuit.
    Gen {
        #[arg(long, value_parser = parse_design)]
        design: DesignId,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = LevelArg::Cliffordt)]
        level: LevelArg,
        /// Defaults to qasm3 for Clifford+T and json for Toffoli level.
        #[arg(long, value_enum)]
        format: Option<CircuitFormat>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Measured resources over a range of widths.
    Cost {
        #[arg(long, value_parser = parse_design)]
        design: DesignId,
        #[arg(long)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        /// Compare against the closed forms; exit 1 on a per-step mismatch.
        #[arg(long)]
        check_formulas: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
    /// Add two numbers on a simulated adder.
    Sim {
        #[arg(long, value_parser = parse_design)]
        design: DesignId,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, value_enum, default_value_t = Backend::Reversible)]
        backend: Backend,
        /// `all` or `seed:S`; statevector only.
        #[arg(long, value_parser = parse_branches)]
        branches: Option<Branches>,
    },
    /// Cost catalog at one width with savings percentages.
    Compare {
        #[arg(long, value_enum)]
        table: Placement,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
    /// Run every acceptance check and write the validation report.
    Verify {
        #[arg(long)]
        full: bool,
        #[arg(short = 'o', long = "output", default_value = "validation_report.json")]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Toffoli,
    Cliffordt,
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitFormat {
    Qasm3,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Reversible,
    Statevector,
}

#[derive(Clone, Copy, ValueEnum)]
enum Placement {
    Out,
    In,
}

#[derive(Clone, Copy)]
enum Branches {
    All,
    Seed(u64),
}

fn parse_design(s: &str) -> Result<DesignId, String> {
    s.parse()
}

fn parse_branches(s: &str) -> Result<Branches, String> {
    if s == "all" {
        return Ok(Branches::All);
    }
    s.strip_prefix("seed:")
        .and_then(|v| v.parse().ok())
        .map(Branches::Seed)
        .ok_or_else(|| format!("expected `all` or `seed:S`, got `{s}`"))
}

/// Exit 2: bad arguments. Exit 1: a check failed.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Check(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn built(design: DesignId, n: u64) -> Result<Circuit, Failure> {
    build(design, n).map_err(|e| usage(e.to_string()))
}

fn lowered(c: &Circuit) -> Circuit {
    lower(c, LoweringPolicy::default()).expect("built circuits lower")
}

fn gen(
    design: DesignId,
    n: u64,
    level: LevelArg,
    format: Option<CircuitFormat>,
    output: Option<&PathBuf>,
) -> Result<(), Failure> {
    let logical = built(design, n)?;
    let circuit = match level {
        LevelArg::Toffoli => logical,
        LevelArg::Cliffordt => lowered(&logical),
    };
    let format = format.unwrap_or(match level {
        LevelArg::Toffoli => CircuitFormat::Json,
        LevelArg::Cliffordt => CircuitFormat::Qasm3,
    });
    let text = match format {
        CircuitFormat::Json => to_json(&circuit),
        CircuitFormat::Qasm3 => {
            to_qasm3(&circuit).map_err(|_| usage("qasm3 export needs --level cliffordt"))?
        }
    };
    write_out(output, &text)
}

#[derive(Serialize)]
struct CostRow {
    design: DesignId,
    n: u64,
    report: ResourceReport,
    logical_depth: u64,
    per_step_t: Option<u64>,
    table_t: Option<u64>,
    table_qubits: Option<u64>,
}

fn cost(
    design: DesignId,
    from: u64,
    to: u64,
    check: bool,
    format: TableFormat,
) -> Result<(), Failure> {
    if from == 0 || from > to {
        return Err(usage(format!(
            "need 1 <= --n-from <= --n-to, got {from}..{to}"
        )));
    }
    let rows: Vec<CostRow> = (from..=to)
        .map(|n| {
            let logical = built(design, n)?;
            let report = count(&lowered(&logical));
            let (per_step_t, table_t, table_qubits) = if check {
                (
                    formula_tcount(design, n, FormulaSource::PerStep).ok(),
                    formula_tcount(design, n, FormulaSource::Table).ok(),
                    formula_qubits(design, n).ok(),
                )
            } else {
                (None, None, None)
            };
            Ok(CostRow {
                design,
                n,
                logical_depth: count(&logical).total_depth,
                report,
                per_step_t,
                table_t,
                table_qubits,
            })
        })
        .collect::<Result<_, Failure>>()?;

    let t = |r: &CostRow| r.report.t_count.unwrap_or(0);
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let delta = |v: Option<u64>, m: u64| {
        v.map_or("-".to_string(), |v| format!("{:+}", m as i64 - v as i64))
    };
    let mut out = String::new();
    match format {
        TableFormat::Json => {
            out = serde_json::to_string_pretty(&rows).expect("rows serialise");
            out.push('\n');
        }
        TableFormat::Csv => {
            out.push_str(
                "design,n,t_count,t_depth,total_depth,logical_depth,qubits,cnots,measurements",
            );
            if check {
                out.push_str(",per_step_t,table_t,table_qubits,qubit_delta");
            }
            out.push('\n');
            for r in &rows {
                let _ = write!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    design.short(),
                    r.n,
                    t(r),
                    r.report.t_depth.unwrap_or(0),
                    r.report.total_depth,
                    r.logical_depth,
                    r.report.qubit_count,
                    r.report.cnot_count,
                    r.report.measurement_count
                );
                if check {
                    let _ = write!(
                        out,
                        ",{},{},{},{}",
                        opt(r.per_step_t),
                        opt(r.table_t),
                        opt(r.table_qubits),
                        delta(r.table_qubits, r.report.qubit_count)
                    );
                }
                out.push('\n');
            }
        }
        TableFormat::Table => {
            let _ = write!(
                out,
                "{:>5} {:>7} {:>7} {:>7} {:>7} {:>7}",
                "n", "T", "T-depth", "depth", "logical", "qubits"
            );
            if check {
                let _ = write!(
                    out,
                    " {:>9} {:>7} {:>8} {:>7}",
                    "per-step", "table", "table-q", "q-delta"
                );
            }
            out.push('\n');
            for r in &rows {
                let _ = write!(
                    out,
                    "{:>5} {:>7} {:>7} {:>7} {:>7} {:>7}",
                    r.n,
                    t(r),
                    r.report.t_depth.unwrap_or(0),
                    r.report.total_depth,
                    r.logical_depth,
                    r.report.qubit_count
                );
                if check {
                    let _ = write!(
                        out,
                        " {:>9} {:>7} {:>8} {:>7}",
                        opt(r.per_step_t),
                        opt(r.table_t),
                        opt(r.table_qubits),
                        delta(r.table_qubits, r.report.qubit_count)
                    );
                }
                out.push('\n');
            }
        }
    }
    print!("{out}");
    if check {
        let bad: Vec<u64> = rows
            .iter()
            .filter(|r| r.per_step_t.is_some_and(|p| p != t(r)))
            .map(|r| r.n)
            .collect();
        if !bad.is_empty() {
            return Err(Failure::Check(format!(
                "measured T-count differs from the per-step sum at n = {bad:?}"
            )));
        }
    }
    Ok(())
}

fn sim(
    design: DesignId,
    n: u64,
    a: u64,
    b: u64,
    backend: Backend,
    branches: Option<Branches>,
) -> Result<(), Failure> {
    if n == 0 || n > 64 {
        return Err(usage("--n must be in 1..=64"));
    }
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if a > limit || b > limit {
        return Err(usage(format!("operands must fit in {n} bits")));
    }
    let expected = a as u128 + b as u128;
    let logical = built(design, n)?;
    match backend {
        Backend::Reversible => {
            if branches.is_some() {
                return Err(usage("--branches applies to the statevector backend"));
            }
            let io = adder_io(&logical, design).map_err(|e| Failure::Check(e.to_string()))?;
            let out = run_basis(&logical, adder_input(&logical, &io, a, b))
                .map_err(|e| Failure::Check(e.to_string()))?;
            let sum = out.read(&io.sum);
            println!("{sum}");
            if sum != expected {
                return Err(Failure::Check(format!("wrong sum: expected {expected}")));
            }
            println!("correct");
        }
        Backend::Statevector => {
            let c = lowered(&logical);
            let io = adder_io(&c, design).map_err(|e| Failure::Check(e.to_string()))?;
            let strategy = match branches.unwrap_or(Branches::Seed(default_seed())) {
                Branches::All => MeasurementStrategy::AllBranches,
                Branches::Seed(s) => MeasurementStrategy::SeededRandom(s),
            };
            let outs = simulate(&c, &adder_input(&c, &io, a, b), &strategy)
                .map_err(|e| usage(e.to_string()))?;
            let sums: Vec<Option<u128>> = outs.iter().map(|o| o.value(&io.sum)).collect();
            let total: f64 = outs.iter().map(|o| o.probability).sum();
            match sums.first() {
                Some(Some(s)) => println!("{s}"),
                _ => println!("?"),
            }
            if sums.iter().any(|s| *s != Some(expected)) {
                return Err(Failure::Check(format!(
                    "some branch does not read {expected}: {sums:?}"
                )));
            }
            println!(
                "correct ({} branches, total probability {total:.12})",
                outs.len()
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareRow {
    work: String,
    t: String,
    qubits: String,
    approximate: bool,
    /// Savings of each design over this work, in design order.
    savings: Vec<String>,
}

fn rational(q: Q) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn compare(placement: Placement, n: u64, format: TableFormat) -> Result<(), Failure> {
    let designs = match placement {
        Placement::Out => [DesignId::OutFtQcla1, DesignId::OutFtQcla2],
        Placement::In => [DesignId::InFtQcla1, DesignId::InFtQcla2],
    };
    let mut works: Vec<Work> = Vec::new();
    for w in baselines(designs[0]) {
        if !works.contains(&w) {
            works.push(w);
        }
    }
    if matches!(placement, Placement::In) {
        works.push(Work::Cheng);
    }
    let mut rows = Vec::new();
    for d in designs {
        let m = design_model(d);
        let (t, q) = match (m.t.evaluate(n), m.qubits.evaluate(n)) {
            (Some(t), Some(q)) if n >= m.min_n => (rational(t), rational(q)),
            _ => return Err(usage(format!("{} is not defined at n = {n}", d.label()))),
        };
        rows.push(CompareRow {
            work: d.label().to_string(),
            t,
            qubits: q,
            approximate: false,
            savings: designs.iter().map(|_| "-".to_string()).collect(),
        });
    }
    for w in works {
        let c = catalog_cost(w.label(), n).map_err(|e| usage(e.to_string()))?;
        rows.push(CompareRow {
            work: w.label().to_string(),
            t: rational(c.t),
            qubits: rational(c.qubits),
            approximate: c.approximate,
            savings: designs.iter().map(|&d| savings(d, w).rendered()).collect(),
        });
    }
    let averages: Vec<(DesignId, String, &str)> = designs
        .iter()
        .map(|&d| (d, percent_string(savings_average(d)), quoted_average(d)))
        .collect();

    let mut out = String::new();
    match format {
        TableFormat::Json => {
            #[derive(Serialize)]
            struct Avg<'a> {
                design: DesignId,
                computed: &'a str,
                quoted: &'a str,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                n: u64,
                designs: Vec<DesignId>,
                rows: &'a [CompareRow],
                averages: Vec<Avg<'a>>,
            }
            let doc = Doc {
                n,
                designs: designs.to_vec(),
                rows: &rows,
                averages: averages
                    .iter()
                    .map(|(d, c, q)| Avg {
                        design: *d,
                        computed: c,
                        quoted: q,
                    })
                    .collect(),
            };
            out = serde_json::to_string_pretty(&doc).expect("serialisable");
            out.push('\n');
        }
        TableFormat::Csv => {
            let _ = write!(out, "work,t,qubits,approximate");
            for d in designs {
                let _ = write!(out, ",savings_{}", d.short());
            }
            out.push('\n');
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.work,
                    r.t,
                    r.qubits,
                    r.approximate,
                    r.savings.join(",")
                );
            }
        }
        TableFormat::Table => {
            let _ = write!(out, "n = {n}\n{:<16} {:>10} {:>8}", "work", "T", "qubits");
            for d in designs {
                let _ = write!(out, " {:>22}", format!("{} savings", d.short()));
            }
            out.push('\n');
            for r in &rows {
                let mark = if r.approximate { "≈" } else { "" };
                let _ = write!(
                    out,
                    "{:<16} {:>10} {:>8}",
                    r.work,
                    format!("{mark}{}", r.t),
                    r.qubits
                );
                for s in &r.savings {
                    let _ = write!(out, " {s:>22}");
                }
                out.push('\n');
            }
            out.push('\n');
            for (d, c, q) in &averages {
                let _ = writeln!(out, "average savings {}: {c} (published: {q})", d.short());
            }
        }
    }
    print!("{out}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            design,
            n,
            level,
            format,
            output,
        } => gen(design, n, level, format, output.as_ref()),
        Command::Cost {
            design,
            n_from,
            n_to,
            check_formulas,
            format,
        } => cost(design, n_from, n_to, check_formulas, format),
        Command::Sim {
            design,
            n,
            a,
            b,
            backend,
            branches,
        } => sim(design, n, a, b, backend, branches),
        Command::Compare { table, n, format } => compare(table, n, format),
        Command::Verify { full, output } => {
            let report = verify(full);
            fs::write(&output, report.to_json())?;
            print!("{}", render_text(&report));
            println!("report written to {}", output.display());
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
