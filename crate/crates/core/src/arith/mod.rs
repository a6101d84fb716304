// SPDX-License-Identifier: Apache-2.0

//! Exact integer arithmetic: Kronecker symbol, primes, factorization and
//! the discriminant type everything else is keyed on.

mod factor;
mod kronecker;
mod sieve;

pub use factor::{factor, is_prime, Factorization};
pub use kronecker::{kronecker, CharacterTable};
pub use sieve::{primes_up_to, shared_primes, PrimeStream, MAX_PRIME_LIMIT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest |D| accepted anywhere in the crate.
pub const MAX_ABS_DISCRIMINANT: u64 = 1 << 40;

/// ω(D): distinct prime divisors of |D|.
pub fn omega(d: i64) -> u32 {
    if d == 0 {
        return 0;
    }
    factor(d.unsigned_abs()).omega()
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).euler_phi()
}

/// Whether D < 0 is the discriminant of an imaginary quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => factor(d.unsigned_abs()).is_squarefree(),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && factor(m.unsigned_abs()).is_squarefree()
        }
        _ => false,
    }
}

/// A validated negative discriminant together with the factorization of |D|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminant {
    value: i64,
    factorization: Factorization,
    fundamental: bool,
}

impl Discriminant {
    /// Any negative D ≡ 0, 1 (mod 4) within the supported envelope.
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(d));
        }
        if d.unsigned_abs() > MAX_ABS_DISCRIMINANT {
            return Err(Error::DiscriminantOutOfRange(d));
        }
        Ok(Discriminant {
            value: d,
            factorization: factor(d.unsigned_abs()),
            fundamental: is_fundamental(d),
        })
    }

    /// Like [`Discriminant::new`] but rejects non-fundamental D.
    pub fn fundamental(d: i64) -> Result<Self> {
        let disc = Self::new(d)?;
        if !disc.fundamental {
            return Err(Error::NotFundamental(d));
        }
        Ok(disc)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn omega(&self) -> u32 {
        self.factorization.omega()
    }

    /// φ(|D|).
    pub fn phi(&self) -> u64 {
        self.factorization.euler_phi()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factorization.primes()
    }

    /// χ_D(n).
    pub fn chi(&self, n: i64) -> i32 {
        kronecker(self.value, n)
    }

    /// The prime discriminants whose product is D (fundamental D only):
    /// p* = ±p ≡ 1 (mod 4) for each odd p | D, then one of -4, 8, -8 for
    /// even D. Returned ascending by |p*| with the 2-part first.
    pub fn prime_discriminants(&self) -> Vec<i64> {
        assert!(self.fundamental, "prime discriminants need fundamental D");
        let mut odd = Vec::new();
        let mut odd_product = 1i64;
        for p in self.primes().filter(|&p| p != 2) {
            let p = p as i64;
            let star = if p % 4 == 1 { p } else { -p };
            odd_product *= star;
            odd.push(star);
        }
        let two_part = self.value / odd_product;
        let mut out = Vec::with_capacity(odd.len() + 1);
        if two_part != 1 {
            out.push(two_part);
        }
        out.extend(odd);
        out
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// All fundamental discriminants D with `lo <= D <= hi < 0`, ascending.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi.min(-1)).filter(|&d| is_fundamental(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_and_phi_examples() {
        assert_eq!(omega(-56), 2);
        assert_eq!(euler_phi(56), 24);
        assert_eq!(omega(-420), 4);
        assert_eq!(omega(-4), 1);
        assert_eq!(omega(-1995), 4);
    }

    #[test]
    fn fundamentality() {
        assert!(is_fundamental(-4));
        assert!(is_fundamental(-3));
        assert!(is_fundamental(-8));
        assert!(is_fundamental(-56));
        assert!(!is_fundamental(-12));
        assert!(!is_fundamental(-16));
        assert!(!is_fundamental(-27));
        assert!(!is_fundamental(-5));
        assert!(!is_fundamental(0));
        assert!(!is_fundamental(5));
        // first few, checked by hand
        assert_eq!(
            fundamental_discriminants(-60, -1),
            vec![
                -59, -56, -55, -52, -51, -47, -43, -40, -39, -35, -31, -24, -23, -20, -19, -15,
                -11, -8, -7, -4, -3
            ]
        );
    }

    #[test]
    fn discriminant_validation() {
        assert_eq!(Discriminant::new(-5), Err(Error::InvalidDiscriminant(-5)));
        assert_eq!(Discriminant::new(8), Err(Error::InvalidDiscriminant(8)));
        assert_eq!(
            Discriminant::fundamental(-12),
            Err(Error::NotFundamental(-12))
        );
        assert!(matches!(
            Discriminant::new(-(1i64 << 41)),
            Err(Error::DiscriminantOutOfRange(_))
        ));
        let d = Discriminant::fundamental(-56).unwrap();
        assert_eq!((d.omega(), d.phi(), d.abs()), (2, 24, 56));
    }

    #[test]
    fn prime_discriminant_decomposition() {
        let pd = |d| Discriminant::fundamental(d).unwrap().prime_discriminants();
        assert_eq!(pd(-4), vec![-4]);
        assert_eq!(pd(-3), vec![-3]);
        assert_eq!(pd(-56), vec![8, -7]);
        assert_eq!(pd(-20), vec![-4, 5]);
        assert_eq!(pd(-15), vec![-3, 5]);
        assert_eq!(pd(-24), vec![8, -3]);
        assert_eq!(pd(-40), vec![-8, 5]);
        for d in fundamental_discriminants(-3000, -3) {
            assert_eq!(pd(d).iter().product::<i64>(), d);
        }
    }

    proptest! {
        #[test]
        fn kronecker_completely_multiplicative(d in -5000i64..5000, m in -2000i64..2000, n in -2000i64..2000) {
            prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
        }
    }

    #[test]
    fn character_periodic_for_fundamental() {
        for d in fundamental_discriminants(-400, -3) {
            let k = d.unsigned_abs() as i64;
            for n in 0..=3 * k {
                assert_eq!(kronecker(d, n), kronecker(d, n % k), "D={d} n={n}");
            }
        }
    }
}
