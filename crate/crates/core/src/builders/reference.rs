use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReferenceError {
    #[error("width {0} outside 1..=64")]
    Width(u32),
    #[error("operand {value} does not fit in {width} bits")]
    OutOfRange { value: u64, width: u32 },
}

/// Classical carry-lookahead addition: per-bit generate/propagate, then the
/// carry recurrence `c_i = p_{i-1}·c_{i-1} ∨ g_{i-1}`. Returns the
/// `(n+1)`-bit sum.
pub fn cla_reference(a: u64, b: u64, n: u32) -> Result<u128, ReferenceError> {
    if n == 0 || n > 64 {
        return Err(ReferenceError::Width(n));
    }
    for value in [a, b] {
        if n < 64 && value >> n != 0 {
            return Err(ReferenceError::OutOfRange { value, width: n });
        }
    }
    let bit = |x: u64, i: u32| (x >> i) & 1 == 1;
    let p: Vec<bool> = (0..n).map(|i| bit(a, i) ^ bit(b, i)).collect();
    let g: Vec<bool> = (0..n).map(|i| bit(a, i) & bit(b, i)).collect();

    let mut s: u128 = 0;
    // no carry-in: c_0 = 0 and s_0 = p_0
    let mut carry = false;
    s |= p[0] as u128;
    for i in 1..n as usize {
        carry = (p[i - 1] & carry) | g[i - 1];
        s |= ((carry ^ p[i]) as u128) << i;
    }
    let last = n as usize - 1;
    let s_n = (p[last] & carry) | g[last];
    s |= (s_n as u128) << n;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        assert_eq!(cla_reference(5, 7, 4), Ok(12));
        assert_eq!(cla_reference(0, 0, 4), Ok(0));
        assert_eq!(cla_reference(15, 1, 4), Ok(16));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            cla_reference(16, 0, 4),
            Err(ReferenceError::OutOfRange {
                value: 16,
                width: 4
            })
        );
        assert_eq!(cla_reference(0, 0, 0), Err(ReferenceError::Width(0)));
        assert_eq!(cla_reference(0, 0, 65), Err(ReferenceError::Width(65)));
    }

    #[test]
    fn exhaustive_small_widths() {
        for n in 1..=8u32 {
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    assert_eq!(cla_reference(a, b, n).unwrap(), a as u128 + b as u128);
                }
            }
        }
    }

    #[test]
    fn random_full_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let (a, b): (u64, u64) = (rng.gen(), rng.gen());
            assert_eq!(cla_reference(a, b, 64).unwrap(), a as u128 + b as u128);
        }
    }
}
