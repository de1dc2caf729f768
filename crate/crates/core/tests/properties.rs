use proptest::prelude::*;

use qcla_core::arith::{floor_log2, hamming_weight};
use qcla_core::builders::{adder_io, build, DesignId};
use qcla_core::circuit::GateKind;
use qcla_core::io::{from_json, parse_qasm3, to_json, to_qasm3};
use qcla_core::lowering::{lower, LoweringPolicy};
use qcla_core::resources::{count, formula_qubits, percent_string, round_percent, schedule, Q};
use qcla_core::revsim::{adder_input, run_basis};

fn design() -> impl Strategy<Value = DesignId> {
    prop::sample::select(DesignId::ALL.to_vec())
}

fn mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adds_any_pair(d in design(), n in 1u32..=64, a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (a & mask(n), b & mask(n));
        let c = build(d, n as u64).unwrap();
        let io = adder_io(&c, d).unwrap();
        let out = run_basis(&c, adder_input(&c, &io, a, b)).unwrap();
        prop_assert_eq!(out.read(&io.sum), a as u128 + b as u128);
        prop_assert_eq!(out.read(&io.a), a as u128);
        if io.restores_b {
            prop_assert_eq!(out.read(&io.b), b as u128);
        }
    }

    #[test]
    fn lowering_cost_and_qubits(d in design(), n in 1u64..=40) {
        let logical = build(d, n).unwrap();
        let before = count(&logical);
        let lowered = lower(&logical, LoweringPolicy::default()).unwrap();
        let after = count(&lowered);
        let t = after.t_count.unwrap();
        prop_assert_eq!(t, 7 * before.gates_of(GateKind::Toffoli) + 4 * before.gates_of(GateKind::TemporaryAnd));
        prop_assert_eq!(t, after.gates_of(GateKind::T) + after.gates_of(GateKind::Tdg));
        prop_assert!(after.t_depth.unwrap() <= t);
        prop_assert_eq!(after.qubit_count, before.qubit_count);
        prop_assert_eq!(after.measurement_count, before.gates_of(GateKind::Uncompute));
        prop_assert_eq!(schedule(&lowered).total_depth, after.total_depth);
    }

    #[test]
    fn qubit_delta_within_one(d in design(), n in 2u64..=64) {
        let q = build(d, n).unwrap().num_qubits() as i64;
        let f = formula_qubits(d, n).unwrap() as i64;
        prop_assert!((q - f).abs() <= 1);
    }

    #[test]
    fn exports_round_trip(d in design(), n in 1u64..=6) {
        let logical = build(d, n).unwrap();
        let lowered = lower(&logical, LoweringPolicy::default()).unwrap();
        let text = to_qasm3(&lowered).unwrap();
        let back = parse_qasm3(&text).unwrap();
        prop_assert_eq!(back.gates(), lowered.gates());
        prop_assert_eq!(to_qasm3(&back).unwrap(), text);
        for c in [&logical, &lowered] {
            let json = to_json(c);
            let back = from_json(&json).unwrap();
            prop_assert_eq!(&back, c);
            prop_assert_eq!(to_json(&back), json);
        }
    }

    #[test]
    fn weight_and_log(n in 1u64..) {
        prop_assert_eq!(hamming_weight(n), n.count_ones() as u64);
        let l = floor_log2(n).unwrap();
        prop_assert!(1u128 << l <= n as u128 && (n as u128) < 1u128 << (l + 1));
    }

    #[test]
    fn percent_rounding_half_up(cents in -100_000i128..100_000, frac in 0i128..1000) {
        let p = Q::new(cents * 1000 + frac, 100_000);
        let r = round_percent(p);
        let diff = r - p;
        prop_assert!(diff > Q::new(-1, 200) && diff <= Q::new(1, 200));
        prop_assert!((r * Q::from_integer(100)).is_integer());
        prop_assert_eq!(percent_string(r), percent_string(p));
    }
}
