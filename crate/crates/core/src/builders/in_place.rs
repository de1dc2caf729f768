//! In-place adders: `B` is overwritten with `s_0..s_{n-1}`, `s_n` lands on
//! the last `Z` slot and `A` is restored.
//!
//! After the forward carry network the carries are erased by running the
//! network backwards on `(a, ¬s)`: for every `i < n` the carry into bit `i`
//! of `a + ¬s (mod 2^i)` equals the carry of `a + b`, so the reverse pass
//! maps each `c_i` back to `a_{i-1} & ¬s_{i-1}`, which a final uncompute
//! clears. The reverse pass runs at width `n - 1` so it never touches `s_n`.

use std::iter;

use super::rounds::{round_indices_with, RoundKind};
use super::{layout, BuildError, BuildOptions, CarryGate, DesignId, Network};
use crate::circuit::{AllocPolicy, AncillaInit, Circuit, Gate, RegisterSpec, WireLabel};

pub(super) fn build(
    design: DesignId,
    n: usize,
    options: BuildOptions,
) -> Result<Circuit, BuildError> {
    let names = layout(design);
    let circuit = Circuit::new(&[
        RegisterSpec::input(names.a, n),
        RegisterSpec::input(names.b, n),
        RegisterSpec::ancilla(names.carries, iter::repeat_n(AncillaInit::MagicA, n)),
        RegisterSpec::scratch(names.scratch),
    ])?;
    let reg = |name: &str| {
        circuit
            .register(name)
            .expect("declared above")
            .qubits
            .clone()
    };
    let (a, b, z) = (reg(names.a), reg(names.b), reg(names.carries));
    // slot k holds the generate span ending at k, i.e. Z[k-1]; slot 0 is
    // never addressed in-place and just aliases Z[0]
    let slots = iter::once(z[0]).chain(z.iter().copied()).collect();

    let mut net = Network {
        circuit,
        a,
        b,
        slots,
        carry_gate: if design.uses_and_pairs() {
            CarryGate::AndPair
        } else {
            CarryGate::Toffoli
        },
        policy: AllocPolicy::Fresh,
    };
    for i in 0..n {
        net.relabel(net.a[i], WireLabel::A(i))?;
        net.relabel(net.b[i], WireLabel::B(i))?;
    }
    let width = n as u64;
    let rounds = |kind| round_indices_with(kind, width, options.bounds);

    // Step 1: g[i,i+1] = a_i & b_i on Z[i]
    for (i, &target) in z.iter().enumerate() {
        net.push(Gate::TemporaryAnd {
            c1: net.a[i],
            c2: net.b[i],
            target,
        })?;
        net.relabel(target, WireLabel::G(i, i + 1))?;
    }
    // Step 2: p[i,i+1] = a_i ^ b_i on B. Bit 0 is included so that B[0]
    // ends up holding s_0.
    for i in 0..n {
        net.push(Gate::Cnot {
            control: net.a[i],
            target: net.b[i],
        })?;
        net.relabel(net.b[i], WireLabel::P(i, i + 1))?;
    }
    // Steps 3-6: forward carry network
    net.p_rounds(&rounds(RoundKind::P))?;
    net.g_rounds(&rounds(RoundKind::G), false)?;
    net.c_rounds(&rounds(RoundKind::C), false)?;
    net.p_erase(&rounds(RoundKind::PErase))?;

    // Step 7: s_i = p_i ^ c_i on B[i]
    for i in 1..n {
        net.push(Gate::Cnot {
            control: z[i - 1],
            target: net.b[i],
        })?;
        net.relabel(net.b[i], WireLabel::S(i))?;
    }
    if n == 1 {
        net.relabel(net.b[0], WireLabel::S(0))?;
    }
    // Step 8: complement the low sum bits, B[0..n-1] := ¬s_i
    for i in 0..n.saturating_sub(1) {
        net.push(Gate::Not(net.b[i]))?;
        net.relabel(net.b[i], WireLabel::Free)?;
    }
    // Step 9: p'_i = a_i ^ ¬s_i
    for i in 1..n.saturating_sub(1) {
        net.push(Gate::Cnot {
            control: net.a[i],
            target: net.b[i],
        })?;
        net.relabel(net.b[i], WireLabel::P(i, i + 1))?;
    }

    // Steps 10-13: carry network in reverse on (a, ¬s). Ancillae come from
    // the forward pass's freed pool.
    net.policy = AllocPolicy::Reuse;
    net.p_rounds(&rounds(RoundKind::ReversePErase))?;
    net.c_rounds(&rounds(RoundKind::ReverseC), true)?;
    net.g_rounds(&rounds(RoundKind::ReverseG), true)?;
    net.p_erase(&rounds(RoundKind::ReverseP))?;

    // Step 14: B[i] back to ¬s_i
    for i in 1..n.saturating_sub(1) {
        net.push(Gate::Cnot {
            control: net.a[i],
            target: net.b[i],
        })?;
        net.relabel(net.b[i], WireLabel::Free)?;
    }
    // Step 15: Z[i] now holds a_i & ¬s_i
    for (i, &zi) in z.iter().enumerate().take(n.saturating_sub(1)) {
        let (x, y) = (net.a[i], net.b[i]);
        net.uncompute(x, y, zi)?;
    }
    // Step 16
    for i in 0..n.saturating_sub(1) {
        net.push(Gate::Not(net.b[i]))?;
        net.relabel(net.b[i], WireLabel::S(i))?;
    }
    net.relabel(z[n - 1], WireLabel::S(n))?;

    Ok(net.circuit)
}
