use primezeta::primes::{nth_prime_upper_bound, prime_blocks, MAX_PRIMES};
use primezeta::{first_n_primes, Error};
use proptest::prelude::*;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trial_division_primes(n: usize) -> Vec<u64> {
    (2..).filter(|&m| is_prime(m)).take(n).collect()
}

#[test]
fn matches_trial_division() {
    let block = first_n_primes(5000).unwrap();
    assert_eq!(block.primes, trial_division_primes(5000));
}

#[test]
fn thousandth_prime() {
    assert_eq!(first_n_primes(1000).unwrap().last(), Some(7919));
}

#[test]
fn upper_bound_covers_nth_prime() {
    let all = first_n_primes(100_000).unwrap().primes;
    for n in [1u64, 2, 5, 6, 100, 1000, 100_000] {
        assert!(all[n as usize - 1] <= nth_prime_upper_bound(n), "n = {n}");
    }
}

#[test]
fn limits_are_enforced() {
    assert!(matches!(
        first_n_primes(MAX_PRIMES + 1),
        Err(Error::ResourceLimit { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_ordinals_are_prime(n in 1u64..1_000_000) {
        let block = first_n_primes(n).unwrap();
        let p = block.last().unwrap();
        prop_assert!(is_prime(p));
        prop_assert_eq!(block.len() as u64, n);
    }

    #[test]
    fn blocks_partition_the_prefix(n in 1u64..20_000, size in 1usize..3000) {
        let blocks: Vec<_> = prime_blocks(n, size).unwrap().collect();
        let mut next = 1;
        let mut joined = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            prop_assert_eq!(b.start_index, next);
            if i + 1 < blocks.len() {
                prop_assert_eq!(b.len(), size);
            }
            prop_assert!(!b.is_empty() && b.len() <= size);
            next += b.len() as u64;
            joined.extend_from_slice(&b.primes);
        }
        prop_assert_eq!(joined, first_n_primes(n).unwrap().primes);
    }
}
