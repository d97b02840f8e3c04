//! Deterministic generation of `p_1 = 2, p_2 = 3, …` with a segmented sieve
//! of Eratosthenes, handed out in contiguous blocks.

use crate::error::{Error, Result};

/// Largest prime count accepted by [`first_n_primes`] and [`prime_blocks`].
pub const MAX_PRIMES: u64 = 1 << 31;

pub const DEFAULT_BLOCK_SIZE: usize = 4096;

/// Odd numbers covered by one sieve segment.
const SEGMENT_ODDS: u64 = 1 << 18;

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// A gap-free run of consecutive primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeBlock {
    /// 1-based ordinal of `primes[0]`.
    pub start_index: u64,
    pub primes: Vec<u64>,
}

impl PrimeBlock {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.primes.last().copied()
    }
}

/// An upper bound on the `n`-th prime.
///
/// For `n ≥ 6`, `p_n < n (ln n + ln ln n)` (Rosser); smaller `n` use a table.
pub fn nth_prime_upper_bound(n: u64) -> u64 {
    assert!(n >= 1);
    if n < 6 {
        return SMALL_PRIMES[n as usize - 1];
    }
    let x = n as f64;
    let bound = x * (x.ln() + x.ln().ln());
    // f64 rounding is far below the slack in the inequality; +2 absorbs it
    bound.ceil() as u64 + 2
}

fn check_count(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Parse("prime count must be at least 1".into()));
    }
    if n > MAX_PRIMES {
        return Err(Error::ResourceLimit {
            requested: n,
            limit: MAX_PRIMES,
        });
    }
    Ok(())
}

/// The first `n` primes as a single block.
pub fn first_n_primes(n: u64) -> Result<PrimeBlock> {
    check_count(n)?;
    let mut primes = Vec::with_capacity(n as usize);
    primes.extend(PrimeSieve::with_limit(nth_prime_upper_bound(n)).take(n as usize));
    assert_eq!(primes.len() as u64, n, "sieve bound too small for n = {n}");
    Ok(PrimeBlock {
        start_index: 1,
        primes,
    })
}

/// The first `n_total` primes split into blocks of `block_size` (the last block
/// may be shorter). Blocks are produced lazily.
pub fn prime_blocks(n_total: u64, block_size: usize) -> Result<PrimeBlocks> {
    check_count(n_total)?;
    if block_size == 0 {
        return Err(Error::Parse("block size must be at least 1".into()));
    }
    Ok(PrimeBlocks {
        sieve: PrimeSieve::with_limit(nth_prime_upper_bound(n_total)),
        remaining: n_total,
        block_size,
        next_index: 1,
    })
}

/// Iterator over [`PrimeBlock`]s; see [`prime_blocks`].
#[derive(Debug, Clone)]
pub struct PrimeBlocks {
    sieve: PrimeSieve,
    remaining: u64,
    block_size: usize,
    next_index: u64,
}

impl Iterator for PrimeBlocks {
    type Item = PrimeBlock;

    fn next(&mut self) -> Option<PrimeBlock> {
        if self.remaining == 0 {
            return None;
        }
        let take = (self.block_size as u64).min(self.remaining) as usize;
        let primes: Vec<u64> = self.sieve.by_ref().take(take).collect();
        assert_eq!(primes.len(), take, "sieve bound too small");
        let block = PrimeBlock {
            start_index: self.next_index,
            primes,
        };
        self.remaining -= take as u64;
        self.next_index += take as u64;
        Some(block)
    }
}

/// Segmented odd-only sieve yielding every prime up to `limit` in order.
#[derive(Debug, Clone)]
struct PrimeSieve {
    limit: u64,
    base: Vec<u64>,
    /// first odd number of the next segment
    low: u64,
    pending: Vec<u64>,
    pos: usize,
    emitted_two: bool,
}

impl PrimeSieve {
    fn with_limit(limit: u64) -> Self {
        let root = limit.isqrt() + 1;
        PrimeSieve {
            limit,
            base: simple_sieve(root),
            low: 3,
            pending: Vec::new(),
            pos: 0,
            emitted_two: false,
        }
    }

    fn fill_segment(&mut self) -> bool {
        if self.low > self.limit {
            return false;
        }
        let low = self.low;
        // exclusive and odd, so the segment holds whole odd numbers
        let end = if self.limit % 2 == 1 {
            self.limit + 2
        } else {
            self.limit + 1
        };
        let high = (low + 2 * SEGMENT_ODDS).min(end);
        let len = ((high - low) / 2) as usize;
        let mut composite = vec![false; len];
        for &q in self.base.iter().skip(1) {
            if q * q >= high {
                break;
            }
            let mut m = (q * q).max(low.div_ceil(q) * q);
            if m % 2 == 0 {
                m += q;
            }
            while m < high {
                composite[((m - low) / 2) as usize] = true;
                m += 2 * q;
            }
        }
        self.pending.clear();
        self.pos = 0;
        self.pending.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| low + 2 * i as u64)
                .filter(|&v| v <= self.limit),
        );
        self.low = high;
        true
    }
}

impl Iterator for PrimeSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if !self.emitted_two {
            self.emitted_two = true;
            if self.limit >= 2 {
                return Some(2);
            }
        }
        while self.pos >= self.pending.len() {
            if !self.fill_segment() {
                return None;
            }
        }
        let p = self.pending[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// All primes `≤ n` by a plain sieve; used for the base primes.
fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            for j in (i * i..=n).step_by(i) {
                is_prime[j] = false;
            }
        }
        i += 1;
    }
    is_prime
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}
