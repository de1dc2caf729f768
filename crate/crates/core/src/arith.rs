//! Integer helpers shared by the round enumerators and the cost formulas.

/// Number of ones in the binary expansion of `n`.
pub fn hamming_weight(n: u64) -> u64 {
    u64::from(n.count_ones())
}

/// `⌊log₂ n⌋` from the bit length. `None` for zero.
pub fn floor_log2(n: u64) -> Option<u64> {
    if n == 0 {
        None
    } else {
        Some(u64::from(63 - n.leading_zeros()))
    }
}

/// Largest `t` with `2^t ≤ 2n/3`, i.e. `⌊log₂(2n/3)⌋` evaluated without
/// floating point. `None` when `2n/3 < 1`.
pub fn floor_log2_two_thirds(n: u64) -> Option<u64> {
    // 2^t <= 2n/3  <=>  3 * 2^t <= 2n
    let twice = 2 * n;
    if twice < 3 {
        return None;
    }
    let mut t = 0u64;
    while 3u64 << (t + 1) <= twice {
        t += 1;
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_and_log_examples() {
        assert_eq!((hamming_weight(8), floor_log2(8)), (1, Some(3)));
        assert_eq!((hamming_weight(7), floor_log2(7)), (3, Some(2)));
        assert_eq!((hamming_weight(1), floor_log2(1)), (1, Some(0)));
        assert_eq!(hamming_weight(0), 0);
        assert_eq!(floor_log2(0), None);
        assert_eq!(floor_log2(u64::MAX), Some(63));
    }

    #[test]
    fn weight_matches_floor_sum_definition() {
        // w(n) = n - sum_{y>=1} floor(n / 2^y)
        for n in 0..4096u64 {
            let mut sum = 0;
            let mut d = 2;
            while d <= n {
                sum += n / d;
                d *= 2;
            }
            assert_eq!(hamming_weight(n), n - sum, "n = {n}");
        }
    }

    #[test]
    fn two_thirds_bound() {
        assert_eq!(floor_log2_two_thirds(1), None);
        assert_eq!(floor_log2_two_thirds(2), Some(0));
        assert_eq!(floor_log2_two_thirds(3), Some(1));
        assert_eq!(floor_log2_two_thirds(8), Some(2));
        assert_eq!(floor_log2_two_thirds(12), Some(3));
        assert_eq!(floor_log2_two_thirds(11), Some(2));
        for n in 2..2000u64 {
            let t = floor_log2_two_thirds(n).unwrap();
            assert!(3 * (1u64 << t) <= 2 * n);
            assert!(3 * (1u64 << (t + 1)) > 2 * n);
        }
    }
}
