use std::process::{Command, Output};

fn qcla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcla"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sim_reversible_prints_sum() {
    let o = qcla(&[
        "sim",
        "--design",
        "out1",
        "--n",
        "4",
        "--a",
        "5",
        "--b",
        "7",
        "--backend",
        "reversible",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("12"));
}

#[test]
fn sim_statevector_all_branches() {
    let o = qcla(&[
        "sim",
        "--design",
        "in1",
        "--n",
        "3",
        "--a",
        "6",
        "--b",
        "7",
        "--backend",
        "statevector",
        "--branches",
        "all",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).lines().next(), Some("13"));
    let o = qcla(&[
        "sim",
        "--design",
        "out2",
        "--n",
        "3",
        "--a",
        "6",
        "--b",
        "7",
        "--backend",
        "statevector",
        "--branches",
        "seed:7",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("13"));
}

#[test]
fn cost_check_formulas_row() {
    let o = qcla(&[
        "cost",
        "--design",
        "out1",
        "--n-from",
        "8",
        "--n-to",
        "8",
        "--check-formulas",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
    // n, T, T-depth, depth, logical, qubits, per-step, table, ...
    assert_eq!(row[0], "8");
    assert_eq!(row[1], "92");
    assert_eq!(row[7], "92");
}

#[test]
fn cost_csv_and_json() {
    let o = qcla(&[
        "cost",
        "--design",
        "in1",
        "--n-from",
        "2",
        "--n-to",
        "4",
        "--check-formulas",
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    assert!(out.starts_with("design,n,t_count"));
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().nth(1).unwrap().starts_with("in1,2,"));
    let o = qcla(&[
        "cost", "--design", "out2", "--n-from", "1", "--n-to", "2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn compare_in_table() {
    let o = qcla(&["compare", "--table", "in", "--n", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("Thapliyal-in")).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cols[3], "60.59");
    assert_eq!(cols[4], "21.18");
    assert!(out.contains("published: 35.87"));
}

#[test]
fn compare_csv_percentages() {
    let o = qcla(&["compare", "--table", "out", "--n", "8", "--format", "csv"]);
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l == "Babu-out,432,97,false,70.37,59.26"),
        "{out}"
    );
}

#[test]
fn gen_is_deterministic_and_parses() {
    let a = qcla(&["gen", "--design", "in2", "--n", "4"]);
    let b = qcla(&["gen", "--design", "in2", "--n", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("OPENQASM 3.0;"));
    qcla_core::io::parse_qasm3(&text).unwrap();

    let j = qcla(&["gen", "--design", "out1", "--n", "2", "--level", "toffoli"]);
    let c = qcla_core::io::from_json(&stdout(&j)).unwrap();
    assert_eq!(
        c,
        qcla_core::builders::build(qcla_core::builders::DesignId::OutFtQcla1, 2).unwrap()
    );
}

#[test]
fn gen_writes_file() {
    let dir = std::env::temp_dir().join(format!("qcla-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out1.qasm");
    let o = qcla(&[
        "gen",
        "--design",
        "out1",
        "--n",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("../golden/out1_n2.qasm");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["gen", "--design", "out3", "--n", "2"][..],
        &["gen", "--design", "out1", "--n", "0"],
        &[
            "gen", "--design", "out1", "--n", "2", "--level", "toffoli", "--format", "qasm3",
        ],
        &[
            "sim", "--design", "out1", "--n", "2", "--a", "4", "--b", "0",
        ],
        &[
            "sim",
            "--design",
            "out1",
            "--n",
            "2",
            "--a",
            "1",
            "--b",
            "0",
            "--branches",
            "all",
        ],
        &[
            "sim",
            "--design",
            "out1",
            "--n",
            "2",
            "--a",
            "1",
            "--b",
            "0",
            "--backend",
            "statevector",
            "--branches",
            "some",
        ],
        &["cost", "--design", "out1", "--n-from", "5", "--n-to", "4"],
        &["compare", "--table", "in", "--n", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(qcla(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_reports_only_depth_failure() {
    let dir = std::env::temp_dir().join(format!("qcla-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = qcla(&["verify", "-o", path.to_str().unwrap()]);
    let out = stdout(&o);
    // criterion 8 (lowered T-depth) is a real failure, so verify exits 1
    assert_eq!(o.status.code(), Some(1));
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("[FAIL]")).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].starts_with("[FAIL] 8."));
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 8);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ids: Vec<&str> = v["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["id"].as_str().unwrap())
        .collect();
    assert_eq!(
        ids,
        [
            "InFtQcla1-TableIV",
            "OutQubitOffByOne",
            "Step13Bound",
            "Abstract35_87",
            "Fig2aTCount"
        ]
    );

    // idempotent apart from timings
    let again = qcla(&["verify", "-o", path.to_str().unwrap()]);
    let strip = |s: String| {
        s.lines()
            .map(|l| l.split(" ms)").last().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(out), strip(stdout(&again)));
    std::fs::remove_dir_all(dir).ok();
}
