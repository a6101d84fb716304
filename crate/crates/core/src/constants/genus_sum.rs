// SPDX-License-Identifier: Apache-2.0

//! Σ_{m | D^∞} g(m, D)/m, truncated at m ≤ M with a rigorous tail bracket.

use serde::{Deserialize, Serialize};

use crate::arith::Discriminant;
use crate::error::{Error, Result};
use crate::forms::genus_partition;

/// Largest truncation bound accepted by [`genus_sum_check`].
pub const MAX_GENUS_SUM_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusSum {
    #[serde(rename = "D")]
    pub discriminant: i64,
    pub bound: u64,
    /// t(D) = ω(D) - 1; there are 2^t genera.
    pub t: u32,
    /// Number of m | D^∞ with m ≤ bound.
    pub terms: usize,
    pub partial_sum: f64,
    /// The full sum lies in [partial_sum, partial_sum + tail_upper].
    pub tail_upper: f64,
    /// |D| / φ(|D|).
    pub closed_form: f64,
}

impl GenusSum {
    pub fn bracket(&self) -> (f64, f64) {
        // a few ulps per term of slack for the floating-point sums
        let slack = 8.0 * f64::EPSILON * (self.terms as f64 + 1.0) * self.closed_form;
        (
            self.partial_sum - slack,
            self.partial_sum + self.tail_upper + slack,
        )
    }

    pub fn brackets_closed_form(&self) -> bool {
        let (lo, hi) = self.bracket();
        lo <= self.closed_form && self.closed_form <= hi
    }
}

/// All m ≤ bound whose prime factors all divide D, ascending.
fn smooth_numbers(primes: &[u64], bound: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in primes {
        let mut next = Vec::new();
        for &m in &out {
            let mut v = m;
            while let Some(w) = v.checked_mul(p).filter(|&w| w <= bound) {
                next.push(w);
                v = w;
            }
        }
        out.extend(next);
    }
    out.sort_unstable();
    out
}

/// Partial genus sum up to `bound` and the bracket that must contain |D|/φ(|D|).
///
/// Each g(m, D) is at most 2^t(D), so the tail is at most 2^t times
/// Σ_{m | D^∞, m > M} 1/m = ∏_{p | D} p/(p-1) - Σ_{m | D^∞, m ≤ M} 1/m.
pub fn genus_sum_check(d: &Discriminant, bound: u64) -> Result<GenusSum> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    if bound > MAX_GENUS_SUM_BOUND {
        return Err(Error::BudgetExceeded {
            what: "genus-sum truncation bound",
            value: bound,
            budget: MAX_GENUS_SUM_BOUND,
        });
    }
    let partition = genus_partition(d)?;
    let t = d.omega() - 1;
    let primes: Vec<u64> = d.primes().collect();
    let ms = smooth_numbers(&primes, bound.max(1));

    let mut weighted = 0.0;
    let mut plain = 0.0;
    // smallest terms last
    for &m in ms.iter().rev() {
        let g = partition.genera_representing_with_budget(m, MAX_GENUS_SUM_BOUND)?;
        weighted += f64::from(g) / m as f64;
        plain += 1.0 / m as f64;
    }
    let full: f64 = primes
        .iter()
        .map(|&p| p as f64 / (p as f64 - 1.0))
        .product();
    let tail = (full - plain).max(0.0);
    Ok(GenusSum {
        discriminant: d.value(),
        bound,
        t,
        terms: ms.len(),
        partial_sum: weighted,
        tail_upper: f64::from(1u32 << t) * tail,
        closed_form: d.abs() as f64 / d.phi() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(d: i64) -> Discriminant {
        Discriminant::fundamental(d).unwrap()
    }

    #[test]
    fn smooth_number_generation() {
        assert_eq!(smooth_numbers(&[2], 20), vec![1, 2, 4, 8, 16]);
        assert_eq!(
            smooth_numbers(&[2, 7], 60),
            vec![1, 2, 4, 7, 8, 14, 16, 28, 32, 49, 56]
        );
        assert_eq!(smooth_numbers(&[3], 1), vec![1]);
    }

    #[test]
    fn minus_4_uses_powers_of_two() {
        let s = genus_sum_check(&fd(-4), 1_000_000).unwrap();
        assert_eq!(s.terms, 20);
        // x² + y² represents every power of two
        let expect: f64 = (0..20).map(|j| 0.5f64.powi(j)).sum();
        assert!((s.partial_sum - expect).abs() < 1e-15);
        assert!(s.brackets_closed_form());
        assert_eq!(s.closed_form, 2.0);
    }

    #[test]
    fn leading_term_is_one() {
        for d in [-3, -4, -8, -20, -56, -420] {
            let s = genus_sum_check(&fd(d), 1).unwrap();
            assert_eq!(s.terms, 1);
            assert_eq!(s.partial_sum, 1.0);
        }
    }

    #[test]
    fn brackets_closed_form() {
        for d in [-3, -4, -7, -8, -15, -20, -24, -56, -84, -420] {
            let s = genus_sum_check(&fd(d), 100_000).unwrap();
            assert!(s.brackets_closed_form(), "D={d}: {s:?}");
        }
        let s = genus_sum_check(&fd(-56), 1_000_000).unwrap();
        assert!((s.closed_form - 7.0 / 3.0).abs() < 1e-15);
        assert!(s.brackets_closed_form());
    }

    #[test]
    fn bound_limits() {
        assert!(matches!(
            genus_sum_check(&fd(-4), MAX_GENUS_SUM_BOUND + 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
