//! Out-of-place adders: the sum lands on the `X` register and both operands
//! are restored.

use std::iter;

use super::rounds::{round_indices, RoundKind};
use super::{layout, BuildError, CarryGate, DesignId, Network};
use crate::circuit::{AllocPolicy, AncillaInit, Circuit, Gate, RegisterSpec, WireLabel};

pub(super) fn build(design: DesignId, n: usize) -> Result<Circuit, BuildError> {
    let names = layout(design);
    let circuit = Circuit::new(&[
        RegisterSpec::input(names.a, n),
        RegisterSpec::input(names.b, n),
        // X_0 collects s_0; X_1..X_n receive the per-bit generates
        RegisterSpec::ancilla(
            names.carries,
            iter::once(AncillaInit::Zero).chain(iter::repeat_n(AncillaInit::MagicA, n)),
        ),
        RegisterSpec::scratch(names.scratch),
    ])?;
    let reg = |name: &str| {
        circuit
            .register(name)
            .expect("declared above")
            .qubits
            .clone()
    };
    let (a, b, slots) = (reg(names.a), reg(names.b), reg(names.carries));

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

    // Step 1: g[i,i+1] = a_i & b_i
    for i in 0..n {
        let (x, y, target) = (net.a[i], net.b[i], net.slots[i + 1]);
        net.push(Gate::TemporaryAnd {
            c1: x,
            c2: y,
            target,
        })?;
        net.relabel(target, WireLabel::G(i, i + 1))?;
    }
    // Step 2: p[i,i+1] = a_i ^ b_i on B, i >= 1
    for i in 1..n {
        net.push(Gate::Cnot {
            control: net.a[i],
            target: net.b[i],
        })?;
        net.relabel(net.b[i], WireLabel::P(i, i + 1))?;
    }
    // Steps 3-6: carry network, then erase the propagate spans
    net.p_rounds(&round_indices(RoundKind::P, width))?;
    net.g_rounds(&round_indices(RoundKind::G, width), false)?;
    net.c_rounds(&round_indices(RoundKind::C, width), false)?;
    net.p_erase(&round_indices(RoundKind::PErase, width))?;

    // Step 7: s_i = p_i ^ c_i on slot i; s_n is already c_n
    for i in 1..n {
        net.push(Gate::Cnot {
            control: net.b[i],
            target: net.slots[i],
        })?;
        net.relabel(net.slots[i], WireLabel::S(i))?;
    }
    net.relabel(net.slots[n], WireLabel::S(n))?;
    net.push(Gate::Cnot {
        control: net.b[0],
        target: net.slots[0],
    })?;
    // Step 8: restore B and finish s_0 = a_0 ^ b_0
    for i in 1..n {
        net.push(Gate::Cnot {
            control: net.a[i],
            target: net.b[i],
        })?;
        net.relabel(net.b[i], WireLabel::B(i))?;
    }
    net.push(Gate::Cnot {
        control: net.a[0],
        target: net.slots[0],
    })?;
    net.relabel(net.slots[0], WireLabel::S(0))?;

    Ok(net.circuit)
}
