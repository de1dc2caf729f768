use qcla_core::builders::{build, DesignId};
use qcla_core::revsim::{check_pairs, exhaustive_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exhaustive_all_designs_up_to_six() {
    for design in DesignId::ALL {
        for n in 1..=6 {
            let r = exhaustive_check(design, n).unwrap();
            assert!(
                r.ok(),
                "{design} n={n}: {:?}",
                &r.failures[..r.failures.len().min(3)]
            );
            assert_eq!(r.total, 1 << (2 * n));
        }
    }
}

#[test]
fn random_pairs_wide() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for design in DesignId::ALL {
        for n in [16u32, 32, 64] {
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let pairs: Vec<_> = (0..1000)
                .map(|_| (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask))
                .collect();
            let c = build(design, n as u64).unwrap();
            let r = check_pairs(&c, design, &pairs).unwrap();
            assert!(
                r.ok(),
                "{design} n={n}: {:?}",
                &r.failures[..r.failures.len().min(3)]
            );
        }
    }
}
