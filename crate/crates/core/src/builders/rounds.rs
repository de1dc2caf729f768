//! Index enumeration for the carry-network rounds.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::arith::{floor_log2, floor_log2_two_thirds};

/// Phase of the carry network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoundKind {
    /// Combine propagate spans onto fresh ancillae.
    P,
    /// Combine generate spans over aligned power-of-two blocks.
    G,
    /// Fill in the remaining carries `g[0,k]`.
    C,
    /// Uncompute the P-round spans (levels descending).
    PErase,
    /// Recompute propagate spans for the in-place cleanup pass.
    ReversePErase,
    /// Undo the C-rounds (levels ascending).
    ReverseC,
    /// Undo the G-rounds (levels descending).
    ReverseG,
    /// Uncompute the spans from [`RoundKind::ReversePErase`].
    ReverseP,
}

impl RoundKind {
    pub fn is_reverse(self) -> bool {
        matches!(
            self,
            RoundKind::ReversePErase
                | RoundKind::ReverseC
                | RoundKind::ReverseG
                | RoundKind::ReverseP
        )
    }
}

/// Which loop bounds to use for the reverse kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RoundBounds {
    /// Reverse rounds run the forward network at width `n - 1`, the width
    /// that leaves `s_n` alone and matches the per-step gate counts.
    #[default]
    Corrected,
    /// Loop bounds exactly as printed for the in-place steps 10–13.
    Printed,
}

/// One gate position inside a round.
///
/// For P/G kinds `j = 2^t·m`, `k = j + 2^t`, `l = j + 2^{t-1}`. For C kinds
/// `j = 0`, `l = 2^t·m`, `k = l + 2^{t-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoundTriple {
    pub t: u32,
    pub m: u64,
    pub j: u64,
    pub k: u64,
    pub l: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    P,
    G,
    C,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Ascending,
    Descending,
}

fn span_triple(t: u32, m: u64) -> RoundTriple {
    let j = m << t;
    RoundTriple {
        t,
        m,
        j,
        k: j + (1 << t),
        l: j + (1 << (t - 1)),
    }
}

fn carry_triple(t: u32, m: u64) -> RoundTriple {
    let l = m << t;
    RoundTriple {
        t,
        m,
        j: 0,
        k: l + (1 << (t - 1)),
        l,
    }
}

/// Inclusive level range of a family at width `n`, or `None` when empty.
fn levels(family: Family, n: u64) -> Option<(u32, u32)> {
    let log = floor_log2(n)? as u32;
    let top = match family {
        Family::P => log.checked_sub(1)?,
        Family::G => log,
        Family::C => floor_log2_two_thirds(n)? as u32,
    };
    (top >= 1).then_some((1, top))
}

/// `m` range for one level at width `n`. `m_limit` replaces `n` in the P
/// bound `⌊n/2^t⌋ - 1`, which the printed step-13 loop needs.
fn positions(family: Family, t: u32, n: u64, m_limit: u64) -> RangeInclusive<u64> {
    let (lo, hi) = match family {
        Family::P => (1, (m_limit >> t) as i64 - 1),
        Family::G => (0, (n >> t) as i64 - 1),
        Family::C => (1, ((n - (1 << (t - 1))) >> t) as i64),
    };
    if hi < lo as i64 {
        // empty
        RangeInclusive::new(1, 0)
    } else {
        lo..=hi as u64
    }
}

fn enumerate(family: Family, n: u64, dir: Direction, m_limit: u64) -> Vec<RoundTriple> {
    let Some((lo, hi)) = levels(family, n) else {
        return Vec::new();
    };
    let ts: Vec<u32> = match dir {
        Direction::Ascending => (lo..=hi).collect(),
        Direction::Descending => (lo..=hi).rev().collect(),
    };
    let mut out = Vec::new();
    for t in ts {
        for m in positions(family, t, n, m_limit) {
            out.push(match family {
                Family::C => carry_triple(t, m),
                _ => span_triple(t, m),
            });
        }
    }
    out
}

/// Ordered triples of one round kind at width `n`, with corrected reverse
/// bounds.
pub fn round_indices(kind: RoundKind, n: u64) -> Vec<RoundTriple> {
    round_indices_with(kind, n, RoundBounds::Corrected)
}

pub fn round_indices_with(kind: RoundKind, n: u64, bounds: RoundBounds) -> Vec<RoundTriple> {
    use Direction::*;
    if n == 0 || (kind.is_reverse() && n < 2) {
        return Vec::new();
    }
    match (kind, bounds) {
        (RoundKind::P, _) => enumerate(Family::P, n, Ascending, n),
        (RoundKind::G, _) => enumerate(Family::G, n, Ascending, n),
        (RoundKind::C, _) => enumerate(Family::C, n, Descending, n),
        (RoundKind::PErase, _) => enumerate(Family::P, n, Descending, n),

        (RoundKind::ReversePErase, RoundBounds::Corrected) => {
            enumerate(Family::P, n - 1, Ascending, n - 1)
        }
        (RoundKind::ReverseC, RoundBounds::Corrected) => {
            enumerate(Family::C, n - 1, Ascending, n - 1)
        }
        (RoundKind::ReverseG, RoundBounds::Corrected) => {
            enumerate(Family::G, n - 1, Descending, n - 1)
        }
        (RoundKind::ReverseP, RoundBounds::Corrected) => {
            enumerate(Family::P, n - 1, Descending, n - 1)
        }

        (RoundKind::ReversePErase, RoundBounds::Printed) => enumerate(Family::P, n, Ascending, n),
        (RoundKind::ReverseC, RoundBounds::Printed) => enumerate(Family::C, n, Ascending, n),
        (RoundKind::ReverseG, RoundBounds::Printed) => enumerate(Family::G, n, Descending, n),
        // t = ⌊log n⌋-1 down to 1, m = 1 .. ⌊(n-1)/2^t⌋ - 1
        (RoundKind::ReverseP, RoundBounds::Printed) => enumerate(Family::P, n, Descending, n - 1),
    }
}
