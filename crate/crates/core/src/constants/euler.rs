// SPDX-License-Identifier: Apache-2.0

//! Two estimators for E(D) = ∏_{χ_D(p) = -1} (1 - p^-2)^-1, and the
//! classical product for the Landau-Ramanujan constant.

use crate::arith::{shared_primes, Discriminant, MAX_PRIME_LIMIT};
use crate::error::{Error, Result};
use crate::lfunc::{for_each_character_value, l_even_log, prime_power_tail, zeta_even_parts};
use crate::numeric::{CompensatedSum, Estimate};

/// Prime bound for the direct product.
pub const DEFAULT_PRIME_BOUND: u64 = 100_000_000;

/// Truncation depth for the accelerated product.
pub const DEFAULT_DEPTH: u32 = 5;

fn check_prime_bound(bound: u64) -> Result<()> {
    if !(100..=MAX_PRIME_LIMIT).contains(&bound) {
        return Err(Error::InvalidArgument(format!(
            "prime bound must lie in [100, {MAX_PRIME_LIMIT}], got {bound}"
        )));
    }
    Ok(())
}

/// Bound on the log of the omitted factors ∏_{p > bound} (1 - p^-2)^-1.
fn square_tail(bound: u64) -> f64 {
    prime_power_tail(bound, 2) / (1.0 - (bound as f64).powi(-2))
}

/// Product over sieved primes p ≤ `bound` with χ_D(p) = -1.
///
/// The omitted factors only push the value up, so the true E(D) lies in
/// `[value, value + abs_error]`.
pub fn euler_product_direct(d: &Discriminant, bound: u64) -> Result<Estimate> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    check_prime_bound(bound)?;
    let stream = shared_primes(bound)?;
    let mut log_sum = CompensatedSum::new();
    for_each_character_value(d, stream.up_to(bound), |p, chi| {
        if chi < 0 {
            let x = (p as f64).powi(-2);
            log_sum.add(-(-x).ln_1p());
        }
    });
    let value = log_sum.value().exp();
    let log_error = square_tail(bound) + log_sum.rounding_bound() + 2.0 * f64::EPSILON;
    Ok(Estimate::new(value, value * log_error.exp_m1()))
}

/// Allowance for floating-point rounding across all accelerated factors:
/// each factor's logs and sums are good to ~8ε(1 + |log|) with |log| < 1,
/// and the weights 1/2^k sum to less than one.
const ACCELERATED_ROUNDING: f64 = 32.0 * f64::EPSILON;

/// (ζ(2^k) / L(2^k, χ_D) · ∏_{p | D} (1 - p^{-2^k}))^{1/2^k}, the k-th factor
/// of the accelerated product.
pub fn accelerated_factor(d: &Discriminant, k: u32, l_bound: u64) -> Result<Estimate> {
    let (log, log_err) = accelerated_log_factor(d, k, l_bound)?;
    let value = log.exp();
    Ok(Estimate::new(
        value,
        value * (log_err + ACCELERATED_ROUNDING).exp_m1(),
    ))
}

/// The k-th log factor and its truncation error (rounding excluded).
fn accelerated_log_factor(d: &Discriminant, k: u32, l_bound: u64) -> Result<(f64, f64)> {
    let s = 1u32 << k;
    let (zeta, zeta_tail) = zeta_even_parts(s)?;
    let l = l_even_log(d, s, l_bound)?;
    let exponent = -f64::from(s);
    let local: f64 = d
        .primes()
        .map(|p| (-(p as f64).powf(exponent)).ln_1p())
        .sum();
    let weight = f64::from(s).recip();
    let log = weight * (zeta.ln() - l.log + local);
    let log_err = weight * (zeta_tail / zeta + l.truncation);
    Ok((log, log_err))
}

/// ∏_{k=1}^{depth} of [`accelerated_factor`], each L-value taken as an Euler
/// product up to `l_bound`.
///
/// Writing A(s) = ∏_{χ_D(p) = -1} (1 - p^-s)^-1, each factor is
/// (A(2^k)² / A(2^{k+1}))^{1/2^k}, so the product telescopes to
/// E(D) / A(2^{depth+1})^{1/2^depth}. Since 1 ≤ A(s) ≤ ζ(s), the omitted
/// remainder is at most ζ(2^{depth+1})^{1/2^depth}.
pub fn euler_product_accelerated(d: &Discriminant, depth: u32, l_bound: u64) -> Result<Estimate> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    if !(3..=6).contains(&depth) {
        return Err(Error::InvalidArgument(format!(
            "truncation depth must lie in [3, 6], got {depth}"
        )));
    }
    let mut log = CompensatedSum::new();
    let mut log_err = 0.0;
    for k in 1..=depth {
        let (v, e) = accelerated_log_factor(d, k, l_bound)?;
        log.add(v);
        log_err += e;
    }
    // ζ(s) - 1 ≤ 2^-s + ∫_2^∞ t^-s dt
    let s = f64::from(1u32 << (depth + 1));
    let zeta_minus_one = 2f64.powf(-s) * (1.0 + 2.0 / (s - 1.0));
    let remainder = zeta_minus_one.ln_1p() / f64::from(1u32 << depth);
    let value = log.value().exp();
    Ok(Estimate::new(
        value,
        value * (log_err + remainder + ACCELERATED_ROUNDING).exp_m1(),
    ))
}

/// (1/√2) ∏_{p ≡ 3 (4), p ≤ bound} (1 - p^-2)^{-1/2}.
pub fn landau_constant_product(bound: u64) -> Result<Estimate> {
    check_prime_bound(bound)?;
    let stream = shared_primes(bound)?;
    let mut log_sum = CompensatedSum::new();
    for &p in stream.up_to(bound) {
        if p % 4 == 3 {
            log_sum.add(-0.5 * (-(f64::from(p)).powi(-2)).ln_1p());
        }
    }
    let value = std::f64::consts::FRAC_1_SQRT_2 * log_sum.value().exp();
    let log_error = 0.5 * square_tail(bound) + log_sum.rounding_bound() + 2.0 * f64::EPSILON;
    Ok(Estimate::new(value, value * log_error.exp_m1()))
}
