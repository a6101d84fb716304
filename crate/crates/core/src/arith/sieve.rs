// SPDX-License-Identifier: Apache-2.0

//! Segmented sieve of Eratosthenes over odd numbers.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// Largest supported sieve limit.
pub const MAX_PRIME_LIMIT: u64 = 1_000_000_000;

/// Odd numbers per segment.
const SEGMENT_ODDS: u64 = 1 << 20;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeStream {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeStream {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The prefix of primes `<= bound`.
    pub fn up_to(&self, bound: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| u64::from(p) <= bound);
        &self.primes[..end]
    }
}

fn small_primes(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Sieve all primes `<= limit` with bounded working memory.
pub fn primes_up_to(limit: u64) -> Result<PrimeStream> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!(
            "prime limit must be at least 2, got {limit}"
        )));
    }
    if limit > MAX_PRIME_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "prime limit",
            value: limit,
            budget: MAX_PRIME_LIMIT,
        });
    }

    let base: Vec<u32> = small_primes(limit.isqrt()).into_iter().skip(1).collect();
    // pi(x) < 1.26 x / ln x
    let estimate = (1.26 * limit as f64 / (limit as f64).ln()) as usize + 16;
    let mut primes = Vec::with_capacity(estimate);
    primes.push(2u32);

    let mut composite = vec![false; SEGMENT_ODDS as usize];
    let mut lo = 3u64;
    while lo <= limit {
        let count = ((limit - lo) / 2 + 1).min(SEGMENT_ODDS) as usize;
        let seg = &mut composite[..count];
        seg.fill(false);
        let top = lo + 2 * (count as u64 - 1);
        for &p in &base {
            let p = u64::from(p);
            if p * p > top {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            if start & 1 == 0 {
                start += p;
            }
            let mut idx = ((start - lo) / 2) as usize;
            let step = p as usize;
            while idx < count {
                seg[idx] = true;
                idx += step;
            }
        }
        for (i, &c) in seg.iter().enumerate() {
            if !c {
                primes.push((lo + 2 * i as u64) as u32);
            }
        }
        lo += 2 * count as u64;
    }
    Ok(PrimeStream { limit, primes })
}

static SHARED: Mutex<Option<Arc<PrimeStream>>> = Mutex::new(None);

/// A process-wide sieve covering at least `limit`; grows on demand.
///
/// Callers take the prefix they need with [`PrimeStream::up_to`].
pub fn shared_primes(limit: u64) -> Result<Arc<PrimeStream>> {
    let mut guard = SHARED.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(s) = guard.as_ref() {
        if s.limit >= limit {
            return Ok(Arc::clone(s));
        }
    }
    let fresh = Arc::new(primes_up_to(limit.max(1_000_000))?);
    *guard = Some(Arc::clone(&fresh));
    Ok(fresh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn tiny_limits() {
        assert_eq!(primes_up_to(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap().primes(), &[2]);
        assert_eq!(primes_up_to(3).unwrap().primes(), &[2, 3]);
        assert!(primes_up_to(1).is_err());
        assert!(matches!(
            primes_up_to(MAX_PRIME_LIMIT + 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn exhaustive_against_trial_division() {
        for limit in 2..=10_000u64 {
            if limit % 997 != 0 && limit > 200 && limit != 10_000 {
                continue;
            }
            let expect: Vec<u32> = (2..=limit)
                .filter(|&n| is_prime_trial(n))
                .map(|n| n as u32)
                .collect();
            assert_eq!(primes_up_to(limit).unwrap().primes(), expect.as_slice());
        }
    }

    #[test]
    fn crosses_segment_boundaries() {
        // several segments of 2^20 odd numbers
        let s = primes_up_to(10_000_000).unwrap();
        assert_eq!(s.len(), 664_579);
        for &p in s.primes().iter().step_by(9973) {
            assert!(is_prime_trial(u64::from(p)));
        }
        let boundary = 3 + 2 * SEGMENT_ODDS;
        for n in boundary - 200..boundary + 200 {
            let listed = s.primes().binary_search(&(n as u32)).is_ok();
            assert_eq!(listed, is_prime_trial(n), "n={n}");
        }
    }

    #[test]
    fn count_to_one_million() {
        let s = primes_up_to(1_000_000).unwrap();
        let trial = (2..=1_000_000u64).filter(|&n| is_prime_trial(n)).count();
        assert_eq!(trial, 78_498);
        assert_eq!(s.len(), trial);
        assert_eq!(s.up_to(100).len(), 25);
        assert_eq!(s.up_to(1).len(), 0);
    }
}
