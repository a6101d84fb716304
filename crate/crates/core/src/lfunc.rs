// SPDX-License-Identifier: Apache-2.0

//! ζ(s) and L(s, χ_D): L(1, χ_D) from the class number, L(2^k, χ_D) as a
//! truncated Euler product with an explicit tail bound, and a character-sum
//! oracle for L(1, χ_D).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::{shared_primes, CharacterTable, Discriminant, MAX_PRIME_LIMIT};
use crate::error::{Error, Result};
use crate::forms::class_number;
use crate::numeric::{CompensatedSum, Estimate};

/// Default prime bound for [`l_even`].
pub const DEFAULT_L_EVEN_BOUND: u64 = 1_000_000;

/// Largest |D| for [`l_one_charsum_oracle`].
pub const CHARSUM_ORACLE_LIMIT: u64 = 10_000_000;

/// Largest |D| for which χ_D is tabulated over one period instead of being
/// evaluated per prime.
pub(crate) const CHARACTER_TABLE_LIMIT: u64 = 10_000_000;

/// Rosser-Schoenfeld: π(x) < 1.25506 x / ln x for x > 1.
const PRIME_COUNT_CONSTANT: f64 = 1.25506;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LMethod {
    ClassNumberFormula,
    EulerProduct,
    CharacterSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub s: u32,
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: LMethod,
}

impl LValue {
    pub fn estimate(&self) -> Estimate {
        Estimate::new(self.value, self.abs_error_bound)
    }
}

/// u(D) = 1/3, 1/2, 1 for D = -3, -4 and D < -4.
pub fn unit_weight(d: i64) -> f64 {
    match d {
        -3 => 1.0 / 3.0,
        -4 => 0.5,
        _ => 1.0,
    }
}

/// Upper bound for Σ_{p > bound} p^-s.
pub fn prime_power_tail(bound: u64, s: u32) -> f64 {
    let p = bound as f64;
    let s = f64::from(s);
    PRIME_COUNT_CONSTANT * s * p.powf(1.0 - s) / ((s - 1.0) * p.ln())
}

/// Calls `visit(p, χ_D(p))` for every prime p in `primes` not dividing D.
///
/// χ_D is tabulated over one period when that is cheaper than evaluating
/// the symbol at each prime.
pub(crate) fn for_each_character_value<F: FnMut(u64, i32)>(
    d: &Discriminant,
    primes: &[u32],
    mut visit: F,
) {
    let tabulate = d.abs() <= CHARACTER_TABLE_LIMIT && d.abs() <= 4 * primes.len() as u64;
    if tabulate && d.is_fundamental() {
        let table = CharacterTable::new(d.value());
        for &p in primes {
            let chi = table.get(u64::from(p));
            if chi != 0 {
                visit(u64::from(p), chi);
            }
        }
    } else {
        for &p in primes {
            let chi = d.chi(i64::from(p));
            if chi != 0 {
                visit(u64::from(p), chi);
            }
        }
    }
}

/// L(1, χ_D) = π u(D) h(D) / sqrt(|D|), given h(D).
pub fn l_one_from_class_number(d: &Discriminant, h: u64) -> Result<LValue> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let value = PI * unit_weight(d.value()) * h as f64 / (d.abs() as f64).sqrt();
    Ok(LValue {
        s: 1,
        value,
        abs_error_bound: 4.0 * f64::EPSILON * value,
        method: LMethod::ClassNumberFormula,
    })
}

/// L(1, χ_D) through the class-number formula, enumerating reduced forms for h(D).
pub fn l_one(d: &Discriminant) -> Result<LValue> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    l_one_from_class_number(d, class_number(d))
}

/// L(1, χ_D) = -π |D|^{-3/2} Σ_{a=1}^{|D|-1} χ_D(a) a, for fundamental D < -4.
pub fn l_one_charsum_oracle(d: &Discriminant) -> Result<LValue> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    if d.value() >= -4 {
        return Err(Error::InvalidArgument(format!(
            "character-sum oracle needs D < -4, got {}",
            d.value()
        )));
    }
    let n = d.abs();
    if n > CHARSUM_ORACLE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "|D| for the character-sum oracle",
            value: n,
            budget: CHARSUM_ORACLE_LIMIT,
        });
    }
    let table = CharacterTable::new(d.value());
    let sum: i64 = (1..n).map(|a| i64::from(table.get(a)) * a as i64).sum();
    let value = -PI * sum as f64 / (n as f64).powf(1.5);
    Ok(LValue {
        s: 1,
        value,
        abs_error_bound: 8.0 * f64::EPSILON * value.abs(),
        method: LMethod::CharacterSum,
    })
}

fn check_power_of_two(s: u32) -> Result<()> {
    if s < 2 || !s.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "evaluation point must be a power of two >= 2, got {s}"
        )));
    }
    Ok(())
}

/// L(s, χ_D) for s = 2, 4, 8, ... as ∏_{p ≤ bound} (1 - χ_D(p) p^-s)^-1.
pub fn l_even(d: &Discriminant, s: u32, bound: u64) -> Result<LValue> {
    let parts = l_even_log(d, s, bound)?;
    let value = parts.log.exp();
    let abs_error_bound = value * (parts.truncation + parts.rounding + 2.0 * f64::EPSILON).exp_m1();
    Ok(LValue {
        s,
        value,
        abs_error_bound,
        method: LMethod::EulerProduct,
    })
}

/// ln L(s, χ_D) with its truncation and summation-rounding bounds kept apart.
pub(crate) struct LogParts {
    pub log: f64,
    pub truncation: f64,
    pub rounding: f64,
}

pub(crate) fn l_even_log(d: &Discriminant, s: u32, bound: u64) -> Result<LogParts> {
    check_power_of_two(s)?;
    if !(100..=MAX_PRIME_LIMIT).contains(&bound) {
        return Err(Error::InvalidArgument(format!(
            "prime bound must lie in [100, {MAX_PRIME_LIMIT}], got {bound}"
        )));
    }
    let stream = shared_primes(bound)?;
    let exponent = f64::from(s);
    let mut log_sum = CompensatedSum::new();
    for_each_character_value(d, stream.up_to(bound), |p, chi| {
        let x = (p as f64).powf(-exponent);
        if x != 0.0 {
            log_sum.add(-(-f64::from(chi) * x).ln_1p());
        }
    });
    Ok(LogParts {
        log: log_sum.value(),
        truncation: prime_power_tail(bound, s) / (1.0 - (bound as f64).powf(-exponent)),
        rounding: log_sum.rounding_bound(),
    })
}

/// ζ(s) for s ∈ {2, 4, 8, 16, 32, 64}: closed forms for 2 and 4, a direct
/// sum with an integral tail bound above that.
pub fn zeta_even(s: u32) -> Result<Estimate> {
    let (value, truncation) = zeta_even_parts(s)?;
    Ok(Estimate::new(
        value,
        truncation + 2.0 * f64::EPSILON * value,
    ))
}

/// ζ(s) and the bound on its omitted tail (zero for the closed forms).
pub(crate) fn zeta_even_parts(s: u32) -> Result<(f64, f64)> {
    match s {
        2 => Ok((PI * PI / 6.0, 0.0)),
        4 => Ok((PI.powi(4) / 90.0, 0.0)),
        8 | 16 | 32 | 64 => {
            const TERMS: u32 = 1000;
            let exponent = f64::from(s);
            let sum: f64 = (1..=TERMS)
                .rev()
                .map(|n| f64::from(n).powf(-exponent))
                .sum();
            let tail = f64::from(TERMS).powf(1.0 - exponent) / (exponent - 1.0);
            Ok((sum, tail))
        }
        _ => Err(Error::InvalidArgument(format!(
            "zeta_even supports s in {{2, 4, 8, 16, 32, 64}}, got {s}"
        ))),
    }
}
